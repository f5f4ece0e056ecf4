#include "hyltl/tableau.hpp"

#include "graph.hpp"
#include "hyltl/error.hpp"

#include <set>

namespace hyltl
{

namespace
{

/// What a successor set must look like for the temporal transfer rules to
/// hold, or `dead` when no successor can satisfy them.
struct requirement
{
  bitset mask;
  bitset value;
  bool dead = false;
};

requirement successor_requirement( const closure_set& cl, const bitset& m )
{
  requirement r{ bitset( cl.size() ), bitset( cl.size() ) };
  auto in = [ & ]( const formula& f ) { return m.test( *cl.index_of( f ) ); };
  auto need = [ & ]( std::size_t i, bool v ) {
    if ( r.mask.test( i ) && r.value.test( i ) != v )
      r.dead = true;
    r.mask.set( i );
    r.value.set( i, v );
  };
  for ( std::size_t i = 0; i < cl.size(); ++i )
  {
    const formula& f = cl.at( i );
    const bool here = m.test( i );
    switch ( f.kind() )
    {
    case formula_kind::next:
      need( *cl.index_of( f.child() ), here );
      break;
    case formula_kind::until:
      if ( in( f.rhs() ) )
        r.dead |= !here;
      else if ( !in( f.lhs() ) )
        r.dead |= here;
      else
        need( i, here );
      break;
    case formula_kind::release:
      if ( in( f.lhs() ) && in( f.rhs() ) )
        r.dead |= !here;
      else if ( !in( f.rhs() ) )
        r.dead |= here;
      else
        need( i, here );
      break;
    default:
      break;
    }
  }
  return r;
}

/// Releases with a negative occurrence in `f`. Their negation is an
/// eventuality the until sets do not cover.
void negated_releases( const formula& f, bool negative, std::set<formula>& out )
{
  switch ( f.kind() )
  {
  case formula_kind::negation:
    negated_releases( f.child(), !negative, out );
    break;
  case formula_kind::next:
    negated_releases( f.child(), negative, out );
    break;
  case formula_kind::release:
    if ( negative )
      out.insert( f );
    [[fallthrough]];
  case formula_kind::conjunction:
  case formula_kind::disjunction:
  case formula_kind::until:
    negated_releases( f.lhs(), negative, out );
    negated_releases( f.rhs(), negative, out );
    break;
  default:
    break;
  }
}

} // namespace

formula_automaton build_formula_automaton( const formula& f, const std::vector<std::string>& variables,
                                           const std::vector<std::string>& actions, const declarations& decl,
                                           const tableau_options& options )
{
  if ( actions.empty() )
    throw error( "empty_alphabet", "the formula automaton needs at least one action" );
  formula_automaton fa{ {}, closure_set( f, actions ), {} };
  const closure_set& cl = fa.closure;
  fa.sets = maximally_consistent_sets( cl );

  hybrid_automaton& h = fa.automaton;
  h.name = "formula";
  h.variables = variables;
  h.actions = cl.actions();
  h.constraints = decl.constraints;

  for ( const auto& m : fa.sets )
  {
    location l;
    l.name = "M_" + m.to_hex();
    l.comment = describe( cl, m );
    for ( std::size_t i = 0; i < cl.size(); ++i )
    {
      if ( !m.test( i ) )
        continue;
      const formula& g = cl.at( i );
      if ( g.is( formula_kind::flow_atom ) )
        l.flow.push_back( g.atom().condition );
      else if ( options.strict && g.is( formula_kind::negation ) && g.child().is( formula_kind::flow_atom ) )
      {
        auto comp = complement_of( g.child().atom(), decl );
        if ( !comp )
          throw error( "missing_complement",
                       "no complement declared for negated flow constraint " + g.child().atom().key() );
        l.flow.push_back( *comp );
      }
    }
    h.locations.push_back( std::move( l ) );
  }

  const auto& act_idx = cl.action_indices();
  for ( std::size_t s = 0; s < fa.sets.size(); ++s )
  {
    const auto req = successor_requirement( cl, fa.sets[ s ] );
    if ( req.dead )
      continue;
    for ( std::size_t a = 0; a < act_idx.size(); ++a )
      for ( std::size_t t = 0; t < fa.sets.size(); ++t )
        if ( fa.sets[ t ].test( act_idx[ a ] ) && fa.sets[ t ].matches( req.mask, req.value ) )
          h.edges.push_back( edge{ s, t, cl.actions()[ a ], {} } );
  }

  for ( std::size_t s = 0; s < fa.sets.size(); ++s )
  {
    const auto& m = fa.sets[ s ];
    bool action = false;
    for ( auto i : act_idx )
      action |= m.test( i );
    if ( m.test( cl.root_index() ) && !action )
      h.initial.push_back( s );
  }

  for ( std::size_t i = 0; i < cl.size(); ++i )
  {
    const formula& g = cl.at( i );
    if ( !g.is( formula_kind::until ) )
      continue;
    const std::size_t rhs = *cl.index_of( g.rhs() );
    std::vector<std::size_t> set;
    for ( std::size_t s = 0; s < fa.sets.size(); ++s )
      if ( fa.sets[ s ].test( rhs ) || !fa.sets[ s ].test( i ) )
        set.push_back( s );
    h.acceptance.push_back( std::move( set ) );
  }

  std::set<formula> releases;
  negated_releases( cl.root(), false, releases );
  for ( const auto& g : releases )
  {
    const std::size_t i = *cl.index_of( g ), rhs = *cl.index_of( g.rhs() );
    std::vector<std::size_t> set;
    for ( std::size_t s = 0; s < fa.sets.size(); ++s )
      if ( !fa.sets[ s ].test( rhs ) || fa.sets[ s ].test( i ) )
        set.push_back( s );
    h.acceptance.push_back( std::move( set ) );
  }
  return fa;
}

namespace
{

std::vector<bool> live_locations( const hybrid_automaton& h )
{
  graph::adjacency succ( h.locations.size() );
  for ( const auto& e : h.edges )
    succ[ e.source ].push_back( e.target );
  std::vector<std::vector<bool>> accept;
  for ( const auto& f : h.acceptance )
  {
    std::vector<bool> mask( h.locations.size(), false );
    for ( auto l : f )
      mask[ l ] = true;
    accept.push_back( std::move( mask ) );
  }
  return graph::live_nodes( succ, h.initial, accept );
}

hybrid_automaton restrict_to( const hybrid_automaton& h, const std::vector<bool>& keep,
                              std::vector<std::size_t>& kept )
{
  std::vector<std::size_t> map( h.locations.size(), h.locations.size() );
  hybrid_automaton out = h;
  out.locations.clear();
  out.edges.clear();
  out.initial.clear();
  for ( std::size_t l = 0; l < h.locations.size(); ++l )
    if ( keep[ l ] )
    {
      map[ l ] = out.locations.size();
      kept.push_back( l );
      out.locations.push_back( h.locations[ l ] );
    }
  for ( const auto& e : h.edges )
    if ( keep[ e.source ] && keep[ e.target ] )
      out.edges.push_back( edge{ map[ e.source ], map[ e.target ], e.action, e.jump } );
  for ( auto l : h.initial )
    if ( keep[ l ] )
      out.initial.push_back( map[ l ] );
  for ( auto& f : out.acceptance )
  {
    std::vector<std::size_t> g;
    for ( auto l : f )
      if ( keep[ l ] )
        g.push_back( map[ l ] );
    f = std::move( g );
  }
  return out;
}

} // namespace

hybrid_automaton prune_unreachable( const hybrid_automaton& h )
{
  std::vector<std::size_t> kept;
  return restrict_to( h, live_locations( h ), kept );
}

formula_automaton prune_unreachable( const formula_automaton& fa )
{
  std::vector<std::size_t> kept;
  formula_automaton out{ restrict_to( fa.automaton, live_locations( fa.automaton ), kept ), fa.closure, {} };
  for ( auto l : kept )
    out.sets.push_back( fa.sets[ l ] );
  return out;
}

} // namespace hyltl
