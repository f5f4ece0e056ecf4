#include "hyltl/product.hpp"

#include "hyltl/error.hpp"

#include <algorithm>
#include <chrono>

namespace hyltl
{

hybrid_automaton negate_and_build( const formula& phi, const hybrid_automaton& system, const check_options& options,
                                   std::vector<std::string>* warnings )
{
  for ( const auto& a : actions_of( phi ) )
    if ( !system.decl().is_action( a ) )
      throw error( "alphabet_mismatch", "formula action '" + a + "' is not an action of the system" );
  for ( const auto& atom : flow_atoms_of( phi ) )
    for ( const auto& v : variables( atom.condition ) )
      if ( !system.decl().is_variable( v.name ) )
        throw error( "alphabet_mismatch", "formula variable '" + v.name + "' is not a variable of the system" );

  const declarations decl = system.decl();
  const formula neg = to_nnf( formula::negation( phi ), decl, nnf_options{ options.strict }, warnings );
  const auto fa = build_formula_automaton( neg, system.variables, system.actions, decl, tableau_options{ options.strict } );
  hybrid_automaton sys = system;
  sys.acceptance.clear();
  return compose( sys, fa.automaton );
}

hybrid_automaton degeneralize( const hybrid_automaton& h )
{
  const std::size_t k = h.acceptance.size();
  if ( k <= 1 )
    return h;
  const std::size_t n = h.locations.size();
  std::vector<std::vector<bool>> in( k, std::vector<bool>( n, false ) );
  for ( std::size_t j = 0; j < k; ++j )
    for ( auto l : h.acceptance[ j ] )
      in[ j ][ l ] = true;

  auto node = [ & ]( std::size_t l, std::size_t c ) { return l * k + c; };
  hybrid_automaton out = h;
  out.locations.clear();
  out.edges.clear();
  out.initial.clear();
  out.acceptance.assign( 1, {} );
  for ( std::size_t l = 0; l < n; ++l )
    for ( std::size_t c = 0; c < k; ++c )
    {
      location loc = h.locations[ l ];
      loc.name += "_" + std::to_string( c );
      out.locations.push_back( std::move( loc ) );
    }
  for ( const auto& e : h.edges )
    for ( std::size_t c = 0; c < k; ++c )
    {
      const std::size_t next = in[ c ][ e.source ] ? ( c + 1 ) % k : c;
      out.edges.push_back( edge{ node( e.source, c ), node( e.target, next ), e.action, e.jump } );
    }
  for ( auto l : h.initial )
    out.initial.push_back( node( l, 0 ) );
  for ( std::size_t l = 0; l < n; ++l )
    if ( in[ k - 1 ][ l ] )
      out.acceptance[ 0 ].push_back( node( l, k - 1 ) );
  return out;
}

namespace
{

std::string fresh_name( const hybrid_automaton& h, const std::string& base, std::vector<std::string>& warnings,
                        const std::vector<std::string>& taken )
{
  auto used = [ & ]( const std::string& n ) {
    return h.decl().is_variable( n ) || h.decl().is_action( n ) ||
           std::find( taken.begin(), taken.end(), n ) != taken.end();
  };
  if ( !used( base ) )
    return base;
  for ( std::size_t i = 1;; ++i )
  {
    const std::string n = base + "_" + std::to_string( i );
    if ( !used( n ) )
    {
      warnings.push_back( "auxiliary variable '" + base + "' renamed to '" + n + "' to avoid a name clash" );
      return n;
    }
  }
}

constraint equals( const std::string& lhs, var_kind k, const expr& rhs )
{
  return constraint{ expr::variable( lhs, k ), relation::eq, rhs };
}

} // namespace

instrumented_automaton instrument( const hybrid_automaton& h, const check_options& options )
{
  if ( h.acceptance.size() > 1 )
    throw error( "invalid_argument", "instrumentation needs at most one acceptance set" );
  if ( h.variables.empty() )
    throw error( "invalid_argument", "instrumentation needs at least one continuous variable" );

  instrumented_automaton out;
  std::vector<std::string> witnesses;
  if ( options.witness_all )
    witnesses = h.variables;
  else if ( !options.witness.empty() )
  {
    if ( !h.decl().is_variable( options.witness ) )
      throw error( "unknown_variable", "witness variable '" + options.witness + "' is not declared" );
    witnesses = { options.witness };
  }
  else
    witnesses = { *std::min_element( h.variables.begin(), h.variables.end() ) };

  std::vector<std::string> taken;
  out.flag = fresh_name( h, "f", out.warnings, taken );
  taken.push_back( out.flag );
  for ( const auto& w : witnesses )
  {
    out.stores.push_back( fresh_name( h, options.witness_all ? "y_" + w : "y", out.warnings, taken ) );
    taken.push_back( out.stores.back() );
  }

  hybrid_automaton& g = out.automaton;
  g = h;
  g.acceptance.clear();
  g.edges.clear();
  g.variables.push_back( out.flag );
  for ( const auto& s : out.stores )
    g.variables.push_back( s );

  const expr zero = expr::constant( 0.0 );
  for ( auto& l : g.locations )
  {
    l.flow.push_back( equals( out.flag, var_kind::dotted, zero ) );
    for ( const auto& s : out.stores )
      l.flow.push_back( equals( s, var_kind::dotted, zero ) );
  }
  for ( auto i : g.initial )
  {
    auto& l = g.locations[ i ];
    l.init.push_back( equals( out.flag, var_kind::plain, zero ) );
    for ( const auto& s : out.stores )
      l.init.push_back( equals( s, var_kind::plain, zero ) );
  }

  std::vector<bool> final( h.locations.size(), h.acceptance.empty() );
  if ( !h.acceptance.empty() )
    for ( auto l : h.acceptance[ 0 ] )
      final[ l ] = true;
  std::vector<double> code( h.locations.size(), 0.0 );
  double next_code = 1.0;
  for ( std::size_t l = 0; l < h.locations.size(); ++l )
    if ( final[ l ] )
    {
      code[ l ] = next_code++;
      out.codes.emplace_back( l, code[ l ] );
    }

  for ( const auto& e : h.edges )
  {
    edge keep = e;
    keep.jump.push_back( equals( out.flag, var_kind::primed, expr::variable( out.flag ) ) );
    for ( const auto& s : out.stores )
      keep.jump.push_back( equals( s, var_kind::primed, expr::variable( s ) ) );
    g.edges.push_back( std::move( keep ) );
    if ( !final[ e.source ] )
      continue;
    edge guess = e;
    guess.jump.push_back( constraint{ expr::variable( out.flag ), relation::eq, zero } );
    guess.jump.push_back( equals( out.flag, var_kind::primed, expr::constant( code[ e.source ] ) ) );
    for ( std::size_t i = 0; i < witnesses.size(); ++i )
      guess.jump.push_back( equals( out.stores[ i ], var_kind::primed, expr::variable( witnesses[ i ] ) ) );
    g.edges.push_back( std::move( guess ) );
  }

  const auto index = [ & ]( const std::string& v ) {
    return static_cast<std::size_t>( std::find( g.variables.begin(), g.variables.end(), v ) - g.variables.begin() );
  };
  out.query.flag = index( out.flag );
  out.query.eps = options.eps;
  for ( std::size_t i = 0; i < witnesses.size(); ++i )
    out.query.pairs.emplace_back( index( out.stores[ i ] ), index( witnesses[ i ] ) );
  for ( const auto& [ l, c ] : out.codes )
    out.query.targets.push_back( { l, c } );
  return out;
}

std::string to_string( outcome o )
{
  return o == outcome::verified ? "Verified" : "Inconclusive";
}

verdict check( const formula& phi, const hybrid_automaton& system, const check_options& options )
{
  const auto t0 = std::chrono::steady_clock::now();
  verdict v;
  v.horizon = options.reach.horizon;
  v.step = options.reach.step;

  hybrid_automaton product = negate_and_build( phi, system, options, &v.warnings );
  v.product_locations = product.locations.size();
  if ( options.prune )
    product = prune_unreachable( product );
  v.pruned_locations = product.locations.size();
  const auto inst = instrument( degeneralize( product ), options );
  v.instrumented_locations = inst.automaton.locations.size();
  v.variables = inst.automaton.variables;
  v.warnings.insert( v.warnings.end(), inst.warnings.begin(), inst.warnings.end() );

  if ( inst.query.targets.empty() )
  {
    v.result = outcome::verified;
    v.reason = "no final location survives; the query set is empty";
  }
  else
  {
    const auto r = reachable( inst.automaton, options.reach );
    v.reached_boxes = r.box_count();
    v.phases = r.phases;
    v.horizon_bounded = r.horizon_bounded;
    v.hits = query( r, inst.query );
    for ( const auto& hit : v.hits )
      v.hit_locations.push_back( inst.automaton.locations[ hit.loc ].name );
    if ( !v.hits.empty() )
    {
      v.result = outcome::inconclusive;
      v.reason = "the over-approximation reaches the query set";
    }
    else if ( !r.complete )
    {
      v.result = outcome::inconclusive;
      v.reason = "exploration stopped at the phase limit";
    }
    else
    {
      v.result = outcome::verified;
      v.reason = v.horizon_bounded ? "query set unreachable within the phase horizon"
                                   : "query set unreachable";
    }
  }
  v.seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - t0 ).count();
  return v;
}

} // namespace hyltl
