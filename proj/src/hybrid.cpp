#include "hyltl/hybrid.hpp"

#include "graph.hpp"
#include "hyltl/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace hyltl
{

valuation restrict( const valuation& x, const std::vector<std::string>& vars )
{
  valuation out;
  for ( const auto& v : vars )
    if ( auto it = x.find( v ); it != x.end() )
      out.insert( *it );
  return out;
}

valuation merge( const valuation& a, const valuation& b )
{
  valuation out = a;
  for ( const auto& [ k, v ] : b )
  {
    auto [ it, fresh ] = out.emplace( k, v );
    if ( !fresh && it->second != v )
      throw error( "valuation_conflict", "valuations disagree on '" + k + "'" );
  }
  return out;
}

sampled_trajectory sampled_trajectory::make( double step, std::vector<valuation> samples,
                                             std::vector<valuation> derivatives )
{
  if ( !( step > 0.0 ) )
    throw error( "invalid_trajectory", "trajectory step must be positive" );
  if ( samples.size() < 2 )
    throw error( "invalid_trajectory", "a trajectory needs at least two samples" );
  for ( const auto& s : samples )
    if ( s.size() != samples.front().size() ||
         !std::equal( s.begin(), s.end(), samples.front().begin(),
                      []( const auto& p, const auto& q ) { return p.first == q.first; } ) )
      throw error( "domain_mismatch", "trajectory samples have different variable domains" );

  sampled_trajectory t;
  t.step = step;
  t.samples = std::move( samples );
  if ( !derivatives.empty() )
  {
    if ( derivatives.size() != t.samples.size() )
      throw error( "invalid_trajectory", "derivative samples do not match trajectory samples" );
    t.derivatives = std::move( derivatives );
    return t;
  }
  const std::size_t n = t.samples.size();
  t.derivatives.resize( n );
  for ( std::size_t k = 0; k < n; ++k )
  {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? k : k + 1;
    const double dt = step * static_cast<double>( hi - lo );
    for ( const auto& [ name, v ] : t.samples[ k ] )
      t.derivatives[ k ][ name ] = ( t.samples[ hi ].at( name ) - t.samples[ lo ].at( name ) ) / dt;
  }
  return t;
}

namespace
{

double lookup_in( const valuation& x, const std::string& name )
{
  auto it = x.find( name );
  if ( it == x.end() )
    throw error( "unknown_variable", "variable '" + name + "' has no value" );
  return it->second;
}

} // namespace

bool satisfies_flow( const sampled_trajectory& tau, const constraint& c, double tol )
{
  const bool dotted = mentions( c, var_kind::dotted );
  if ( mentions( c, var_kind::primed ) )
    throw error( "invalid_constraint", "flow constraint mentions a primed variable: " + to_string( c ) );
  const std::size_t n = tau.samples.size();
  for ( std::size_t k = 0; k < n; ++k )
  {
    // derivatives at the two endpoints are unconstrained
    if ( dotted && ( k == 0 || k + 1 == n ) )
      continue;
    auto lookup = [ & ]( const var_ref& v ) {
      return v.kind == var_kind::dotted ? lookup_in( tau.derivatives[ k ], v.name ) : lookup_in( tau.samples[ k ], v.name );
    };
    if ( !holds( c, lookup, tol ) )
      return false;
  }
  return true;
}

bool satisfies_flow( const sampled_trajectory& tau, const std::vector<constraint>& cs, double tol )
{
  return std::all_of( cs.begin(), cs.end(), [ & ]( const constraint& c ) { return satisfies_flow( tau, c, tol ); } );
}

bool satisfies_jump( const valuation& x, const valuation& xp, const constraint& c, double tol )
{
  if ( mentions( c, var_kind::dotted ) )
    throw error( "invalid_constraint", "jump constraint mentions a derivative: " + to_string( c ) );
  auto lookup = [ & ]( const var_ref& v ) {
    return v.kind == var_kind::primed ? lookup_in( xp, v.name ) : lookup_in( x, v.name );
  };
  return holds( c, lookup, tol );
}

std::optional<std::size_t> hybrid_automaton::find_location( const std::string& n ) const
{
  for ( std::size_t i = 0; i < locations.size(); ++i )
    if ( locations[ i ].name == n )
      return i;
  return std::nullopt;
}

std::size_t hybrid_automaton::location_index( const std::string& n ) const
{
  if ( auto i = find_location( n ) )
    return *i;
  throw error( "unknown_location", "no location named '" + n + "'" );
}

bool hybrid_automaton::is_initial( std::size_t loc ) const
{
  return std::find( initial.begin(), initial.end(), loc ) != initial.end();
}

declarations hybrid_automaton::decl() const
{
  return declarations{ variables, actions, constraints };
}

void hybrid_automaton::validate() const
{
  std::set<std::string> names;
  for ( const auto& l : locations )
    if ( !names.insert( l.name ).second )
      throw error( "invalid_model", "duplicate location '" + l.name + "'" );
  std::set<std::string> vars( variables.begin(), variables.end() );
  if ( vars.size() != variables.size() )
    throw error( "invalid_model", "duplicate variable declaration" );
  auto check_vars = [ & ]( const constraint& c ) {
    for ( const auto& v : hyltl::variables( c ) )
      if ( !vars.count( v.name ) )
        throw error( "unknown_variable", "constraint " + to_string( c ) + " uses undeclared '" + v.name + "'" );
  };
  for ( const auto& l : locations )
  {
    for ( const auto& c : l.flow )
    {
      check_vars( c );
      if ( mentions( c, var_kind::primed ) )
        throw error( "invalid_model", "flow of '" + l.name + "' mentions a primed variable" );
    }
    for ( const auto& c : l.init )
    {
      check_vars( c );
      if ( mentions( c, var_kind::primed ) || mentions( c, var_kind::dotted ) )
        throw error( "invalid_model", "initial region of '" + l.name + "' must use plain variables" );
    }
  }
  for ( const auto& e : edges )
  {
    if ( e.source >= locations.size() || e.target >= locations.size() )
      throw error( "invalid_model", "edge endpoint out of range" );
    if ( std::find( actions.begin(), actions.end(), e.action ) == actions.end() )
      throw error( "unknown_action", "edge uses undeclared action '" + e.action + "'" );
    for ( const auto& c : e.jump )
    {
      check_vars( c );
      if ( mentions( c, var_kind::dotted ) )
        throw error( "invalid_model", "jump constraint mentions a derivative" );
    }
  }
  for ( auto i : initial )
    if ( i >= locations.size() )
      throw error( "invalid_model", "initial location out of range" );
  for ( const auto& f : acceptance )
    for ( auto i : f )
      if ( i >= locations.size() )
        throw error( "invalid_model", "final location out of range" );
}

bool admissible( const hybrid_automaton& h, std::size_t loc, const valuation& x, double tol )
{
  for ( const auto& c : h.locations.at( loc ).flow )
  {
    if ( mentions( c, var_kind::dotted ) )
      continue;
    if ( !holds( c, [ & ]( const var_ref& v ) { return lookup_in( x, v.name ); }, tol ) )
      return false;
  }
  return true;
}

namespace
{

void append_unique( std::vector<constraint>& into, const std::vector<constraint>& from )
{
  for ( const auto& c : from )
    if ( std::find( into.begin(), into.end(), c ) == into.end() )
      into.push_back( c );
}

constraint frozen( const std::string& x )
{
  return constraint{ expr::variable( x, var_kind::primed ), relation::eq, expr::variable( x ) };
}

bool contains( const std::vector<std::string>& v, const std::string& s )
{
  return std::find( v.begin(), v.end(), s ) != v.end();
}

} // namespace

hybrid_automaton compose( const hybrid_automaton& h1, const hybrid_automaton& h2 )
{
  hybrid_automaton h;
  h.name = h1.name + "_" + h2.name;
  h.variables = h1.variables;
  for ( const auto& v : h2.variables )
    if ( !contains( h.variables, v ) )
      h.variables.push_back( v );
  h.actions = h1.actions;
  for ( const auto& a : h2.actions )
    if ( !contains( h.actions, a ) )
      h.actions.push_back( a );
  h.constraints = h1.constraints;
  for ( const auto& c : h2.constraints )
    if ( !h.decl().find_constraint( c.name ) )
      h.constraints.push_back( c );

  const std::size_t n2 = h2.locations.size();
  auto pair = [ & ]( std::size_t i1, std::size_t i2 ) { return i1 * n2 + i2; };
  for ( const auto& l1 : h1.locations )
    for ( const auto& l2 : h2.locations )
    {
      location l;
      l.name = l1.name + "." + l2.name;
      l.flow = l1.flow;
      append_unique( l.flow, l2.flow );
      l.init = l1.init;
      append_unique( l.init, l2.init );
      h.locations.push_back( std::move( l ) );
    }

  std::vector<constraint> freeze1, freeze2;
  for ( const auto& x : h1.variables )
    if ( !contains( h2.variables, x ) )
      freeze1.push_back( frozen( x ) );
  for ( const auto& x : h2.variables )
    if ( !contains( h1.variables, x ) )
      freeze2.push_back( frozen( x ) );

  for ( const auto& e1 : h1.edges )
  {
    if ( contains( h2.actions, e1.action ) )
    {
      for ( const auto& e2 : h2.edges )
        if ( e2.action == e1.action )
        {
          edge e{ pair( e1.source, e2.source ), pair( e1.target, e2.target ), e1.action, e1.jump };
          append_unique( e.jump, e2.jump );
          h.edges.push_back( std::move( e ) );
        }
    }
    else
      for ( std::size_t l2 = 0; l2 < n2; ++l2 )
      {
        edge e{ pair( e1.source, l2 ), pair( e1.target, l2 ), e1.action, e1.jump };
        append_unique( e.jump, freeze2 );
        h.edges.push_back( std::move( e ) );
      }
  }
  for ( const auto& e2 : h2.edges )
    if ( !contains( h1.actions, e2.action ) )
      for ( std::size_t l1 = 0; l1 < h1.locations.size(); ++l1 )
      {
        edge e{ pair( l1, e2.source ), pair( l1, e2.target ), e2.action, e2.jump };
        append_unique( e.jump, freeze1 );
        h.edges.push_back( std::move( e ) );
      }

  for ( auto i1 : h1.initial )
    for ( auto i2 : h2.initial )
      h.initial.push_back( pair( i1, i2 ) );

  for ( const auto& f : h1.acceptance )
  {
    std::vector<std::size_t> lifted;
    for ( auto l1 : f )
      for ( std::size_t l2 = 0; l2 < n2; ++l2 )
        lifted.push_back( pair( l1, l2 ) );
    std::sort( lifted.begin(), lifted.end() );
    h.acceptance.push_back( std::move( lifted ) );
  }
  for ( const auto& f : h2.acceptance )
  {
    std::vector<std::size_t> lifted;
    for ( std::size_t l1 = 0; l1 < h1.locations.size(); ++l1 )
      for ( auto l2 : f )
        lifted.push_back( pair( l1, l2 ) );
    std::sort( lifted.begin(), lifted.end() );
    h.acceptance.push_back( std::move( lifted ) );
  }
  return h;
}

namespace
{

/// Solve the primed variables of `jump` from `x`. Variables without a
/// defining equality keep their current value.
valuation solve_post( const std::vector<constraint>& jump, const valuation& x )
{
  valuation xp = x;
  auto plain = [ & ]( const var_ref& v ) { return lookup_in( x, v.name ); };
  for ( const auto& c : jump )
  {
    if ( c.rel != relation::eq || !mentions( c, var_kind::primed ) )
      continue;
    std::set<var_ref> primed;
    for ( const auto& v : variables( c ) )
      if ( v.kind == var_kind::primed )
        primed.insert( v );
    if ( primed.size() != 1 )
      continue;
    const var_ref target = *primed.begin();
    if ( auto lf = linearize( c ) )
    {
      const double k = lf->coeff( target );
      if ( k == 0.0 )
        continue;
      double rest = lf->constant;
      for ( const auto& [ v, a ] : lf->coeffs )
        if ( !( v == target ) )
          rest += a * plain( v );
      xp[ target.name ] = -rest / k;
    }
    else if ( c.lhs.op() == expr_op::variable && c.lhs.var() == target )
      xp[ target.name ] = evaluate( c.rhs, plain );
    else if ( c.rhs.op() == expr_op::variable && c.rhs.var() == target )
      xp[ target.name ] = evaluate( c.lhs, plain );
  }
  return xp;
}

} // namespace

std::vector<hybrid_state> discrete_step( const hybrid_automaton& h, const hybrid_state& s, const std::string& a,
                                         double tol )
{
  if ( !admissible( h, s.loc, s.x, tol ) )
    throw error( "not_admissible", "state is not admissible in location '" + h.locations.at( s.loc ).name + "'" );
  std::vector<hybrid_state> out;
  for ( const auto& e : h.edges )
  {
    if ( e.source != s.loc || e.action != a )
      continue;
    hybrid_state next{ e.target, solve_post( e.jump, s.x ) };
    const bool ok = std::all_of( e.jump.begin(), e.jump.end(),
                                 [ & ]( const constraint& c ) { return satisfies_jump( s.x, next.x, c, tol ); } );
    if ( ok && admissible( h, e.target, next.x, tol ) &&
         std::find( out.begin(), out.end(), next ) == out.end() )
      out.push_back( std::move( next ) );
  }
  return out;
}

void hybrid_lasso_trace::validate() const
{
  if ( cycle.empty() )
    throw error( "invalid_trace", "lasso cycle must not be empty" );
  const auto& ref = at( 0 ).trajectory.fstate();
  for ( std::size_t i = 0; i < length(); ++i )
  {
    const auto& s = at( i ).trajectory.fstate();
    if ( s.size() != ref.size() ||
         !std::equal( s.begin(), s.end(), ref.begin(), []( const auto& p, const auto& q ) { return p.first == q.first; } ) )
      throw error( "domain_mismatch", "trace segments range over different variables" );
  }
}

namespace
{

bool in_init_region( const hybrid_automaton& h, std::size_t loc, const valuation& x, double tol )
{
  for ( const auto& c : h.locations[ loc ].init )
    if ( !holds( c, [ & ]( const var_ref& v ) { return lookup_in( x, v.name ); }, tol ) )
      return false;
  return true;
}

bool jump_ok( const hybrid_automaton& h, std::size_t from, const std::string& a, std::size_t to, const valuation& x,
              const valuation& xp, double tol )
{
  if ( !admissible( h, from, x, tol ) || !admissible( h, to, xp, tol ) )
    return false;
  for ( const auto& e : h.edges )
    if ( e.source == from && e.target == to && e.action == a &&
         std::all_of( e.jump.begin(), e.jump.end(),
                      [ & ]( const constraint& c ) { return satisfies_jump( x, xp, c, tol ); } ) )
      return true;
  return false;
}

} // namespace

bool is_generated( const hybrid_lasso_trace& trace, const hybrid_automaton& h, const lasso_witness& w, double tol )
{
  trace.validate();
  if ( w.prefix.size() != trace.prefix.size() || w.cycle.size() != trace.cycle.size() )
    throw error( "domain_mismatch", "witness length does not match the trace" );
  auto loc = [ & ]( std::size_t i ) { return i < w.prefix.size() ? w.prefix[ i ] : w.cycle[ i - w.prefix.size() ]; };
  const std::size_t n = trace.length();
  for ( std::size_t i = 0; i < n; ++i )
    if ( loc( i ) >= h.locations.size() )
      throw error( "domain_mismatch", "witness location out of range" );
  if ( !h.is_initial( loc( 0 ) ) || !in_init_region( h, loc( 0 ), trace.at( 0 ).trajectory.fstate(), tol ) )
    return false;
  for ( std::size_t i = 0; i < n; ++i )
  {
    const auto& step = trace.at( i );
    if ( !satisfies_flow( step.trajectory, h.locations[ loc( i ) ].flow, tol ) )
      return false;
    const std::size_t j = trace.succ( i );
    if ( !jump_ok( h, loc( i ), step.action, loc( j ), step.trajectory.lstate(), trace.at( j ).trajectory.fstate(),
                   tol ) )
      return false;
  }
  return true;
}

bool accepts( const hybrid_lasso_trace& trace, const hybrid_automaton& h, const lasso_witness& w, double tol )
{
  if ( !is_generated( trace, h, w, tol ) )
    return false;
  for ( const auto& f : h.acceptance )
    if ( std::none_of( w.cycle.begin(), w.cycle.end(),
                       [ & ]( std::size_t l ) { return std::find( f.begin(), f.end(), l ) != f.end(); } ) )
      return false;
  return true;
}

namespace
{

/// Product of the automaton's locations with folded trace positions.
struct position_product
{
  graph::adjacency succ;
  std::vector<std::size_t> initial;
  std::vector<std::vector<bool>> accept;
};

std::vector<std::vector<bool>> lift_acceptance( const hybrid_automaton& h, std::size_t positions )
{
  std::vector<std::vector<bool>> accept;
  for ( const auto& f : h.acceptance )
  {
    std::vector<bool> mask( h.locations.size() * positions, false );
    for ( auto l : f )
      for ( std::size_t p = 0; p < positions; ++p )
        mask[ l * positions + p ] = true;
    accept.push_back( std::move( mask ) );
  }
  return accept;
}

} // namespace

std::optional<accepting_run> find_accepting_run( const hybrid_lasso_trace& trace, const hybrid_automaton& h,
                                                 double tol )
{
  trace.validate();
  const std::size_t n = trace.length();
  const std::size_t nl = h.locations.size();
  auto node = [ & ]( std::size_t l, std::size_t p ) { return l * n + p; };

  std::vector<bool> flow_ok( nl * n, false );
  for ( std::size_t l = 0; l < nl; ++l )
    for ( std::size_t p = 0; p < n; ++p )
      flow_ok[ node( l, p ) ] = satisfies_flow( trace.at( p ).trajectory, h.locations[ l ].flow, tol );

  position_product g;
  g.succ.resize( nl * n );
  for ( const auto& e : h.edges )
    for ( std::size_t p = 0; p < n; ++p )
    {
      const auto& step = trace.at( p );
      const std::size_t q = trace.succ( p );
      if ( step.action != e.action || !flow_ok[ node( e.source, p ) ] || !flow_ok[ node( e.target, q ) ] )
        continue;
      if ( !jump_ok( h, e.source, e.action, e.target, step.trajectory.lstate(), trace.at( q ).trajectory.fstate(),
                     tol ) )
        continue;
      auto& out = g.succ[ node( e.source, p ) ];
      if ( std::find( out.begin(), out.end(), node( e.target, q ) ) == out.end() )
        out.push_back( node( e.target, q ) );
    }
  for ( auto& out : g.succ )
    std::sort( out.begin(), out.end() );
  for ( auto l : h.initial )
    if ( flow_ok[ node( l, 0 ) ] && in_init_region( h, l, trace.at( 0 ).trajectory.fstate(), tol ) )
      g.initial.push_back( node( l, 0 ) );
  g.accept = lift_acceptance( h, n );

  auto lasso = graph::find_accepting_lasso( g.succ, g.initial, g.accept );
  if ( !lasso )
    return std::nullopt;
  accepting_run run;
  for ( auto v : lasso->prefix )
  {
    run.witness.prefix.push_back( v / n );
    run.trace.prefix.push_back( trace.at( v % n ) );
  }
  for ( auto v : lasso->cycle )
  {
    run.witness.cycle.push_back( v / n );
    run.trace.cycle.push_back( trace.at( v % n ) );
  }
  return run;
}

bool accepts_word( const hybrid_automaton& h, const std::vector<std::string>& prefix,
                   const std::vector<std::string>& cycle )
{
  if ( cycle.empty() )
    throw error( "invalid_trace", "lasso cycle must not be empty" );
  const std::size_t n = prefix.size() + cycle.size();
  auto word = [ & ]( std::size_t p ) -> const std::string& {
    return p < prefix.size() ? prefix[ p ] : cycle[ p - prefix.size() ];
  };
  auto succ = [ & ]( std::size_t p ) { return p + 1 < n ? p + 1 : prefix.size(); };
  graph::adjacency g( h.locations.size() * n );
  for ( const auto& e : h.edges )
    for ( std::size_t p = 0; p < n; ++p )
      if ( word( p ) == e.action )
        g[ e.source * n + p ].push_back( e.target * n + succ( p ) );
  std::vector<std::size_t> init;
  for ( auto l : h.initial )
    init.push_back( l * n );
  return graph::find_accepting_lasso( g, init, lift_acceptance( h, n ) ).has_value();
}

namespace
{

std::vector<std::string> constraint_strings( const std::vector<constraint>& cs )
{
  std::vector<std::string> out;
  for ( const auto& c : cs )
    out.push_back( to_string( c ) );
  std::sort( out.begin(), out.end() );
  return out;
}

} // namespace

bool isomorphic( const hybrid_automaton& a, const hybrid_automaton& b )
{
  if ( a.locations.size() != b.locations.size() || a.edges.size() != b.edges.size() ||
       a.initial.size() != b.initial.size() || a.acceptance.size() != b.acceptance.size() )
    return false;
  if ( std::set<std::string>( a.variables.begin(), a.variables.end() ) !=
           std::set<std::string>( b.variables.begin(), b.variables.end() ) ||
       std::set<std::string>( a.actions.begin(), a.actions.end() ) !=
           std::set<std::string>( b.actions.begin(), b.actions.end() ) )
    return false;

  const std::size_t n = a.locations.size();
  auto signature = [ & ]( const hybrid_automaton& h, std::size_t l ) {
    std::string s = h.is_initial( l ) ? "I;" : ";";
    for ( const auto& c : constraint_strings( h.locations[ l ].flow ) )
      s += c + ",";
    s += ";";
    for ( const auto& c : constraint_strings( h.locations[ l ].init ) )
      s += c + ",";
    std::size_t out = 0, in = 0;
    for ( const auto& e : h.edges )
    {
      out += e.source == l;
      in += e.target == l;
    }
    return s + ";" + std::to_string( out ) + ";" + std::to_string( in );
  };
  std::vector<std::string> sa( n ), sb( n );
  for ( std::size_t l = 0; l < n; ++l )
  {
    sa[ l ] = signature( a, l );
    sb[ l ] = signature( b, l );
  }

  using edge_key = std::tuple<std::size_t, std::string, std::size_t, std::vector<std::string>>;
  std::multiset<edge_key> eb;
  for ( const auto& e : b.edges )
    eb.insert( { e.source, e.action, e.target, constraint_strings( e.jump ) } );
  std::multiset<std::vector<std::size_t>> fb;
  for ( auto f : b.acceptance )
  {
    std::sort( f.begin(), f.end() );
    f.erase( std::unique( f.begin(), f.end() ), f.end() );
    fb.insert( f );
  }

  std::vector<std::size_t> map( n );
  std::vector<bool> used( n, false );
  std::function<bool( std::size_t )> search = [ & ]( std::size_t l ) -> bool {
    if ( l == n )
    {
      std::multiset<edge_key> ea;
      for ( const auto& e : a.edges )
        ea.insert( { map[ e.source ], e.action, map[ e.target ], constraint_strings( e.jump ) } );
      if ( ea != eb )
        return false;
      std::multiset<std::vector<std::size_t>> fa;
      for ( const auto& f : a.acceptance )
      {
        std::vector<std::size_t> g;
        for ( auto x : f )
          g.push_back( map[ x ] );
        std::sort( g.begin(), g.end() );
        g.erase( std::unique( g.begin(), g.end() ), g.end() );
        fa.insert( g );
      }
      return fa == fb;
    }
    for ( std::size_t m = 0; m < n; ++m )
      if ( !used[ m ] && sa[ l ] == sb[ m ] )
      {
        used[ m ] = true;
        map[ l ] = m;
        if ( search( l + 1 ) )
          return true;
        used[ m ] = false;
      }
    return false;
  };
  return search( 0 );
}

} // namespace hyltl
