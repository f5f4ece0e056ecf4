#include "hyltl/monitor.hpp"

#include "hyltl/dynamics.hpp"
#include "hyltl/error.hpp"
#include "hyltl/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>

namespace hyltl
{

namespace
{

/// A lasso whose first cycle position has the same predecessor on entry
/// and on wrap-around: the first cycle element is moved into the prefix.
struct shifted_lasso
{
  std::size_t prefix = 0;
  std::size_t cycle = 0;

  std::size_t size() const { return prefix + 1 + cycle; }
  std::size_t succ( std::size_t j ) const { return j + 1 < size() ? j + 1 : prefix + 1; }
  /// Folded index in the original lasso.
  std::size_t original( std::size_t j ) const { return j <= prefix ? j : prefix + ( j - prefix ) % cycle; }
};

using atom_fn = std::function<bool( const formula&, std::size_t )>;

std::vector<bool> truth( const formula& f, const shifted_lasso& s, const atom_fn& atom )
{
  const std::size_t n = s.size();
  std::vector<bool> v( n );
  switch ( f.kind() )
  {
  case formula_kind::top:
    v.assign( n, true );
    break;
  case formula_kind::bottom:
    v.assign( n, false );
    break;
  case formula_kind::flow_atom:
  case formula_kind::action_atom:
    for ( std::size_t j = 0; j < n; ++j )
      v[ j ] = atom( f, j );
    break;
  case formula_kind::negation:
    v = truth( f.child(), s, atom );
    v.flip();
    break;
  case formula_kind::conjunction:
  case formula_kind::disjunction:
  {
    const auto l = truth( f.lhs(), s, atom );
    const auto r = truth( f.rhs(), s, atom );
    for ( std::size_t j = 0; j < n; ++j )
      v[ j ] = f.is( formula_kind::conjunction ) ? l[ j ] && r[ j ] : l[ j ] || r[ j ];
    break;
  }
  case formula_kind::next:
  {
    const auto c = truth( f.child(), s, atom );
    for ( std::size_t j = 0; j < n; ++j )
      v[ j ] = c[ s.succ( j ) ];
    break;
  }
  case formula_kind::until:
  case formula_kind::release:
  {
    // least fixpoint for U, greatest for R; the successor graph is a lasso
    // so n sweeps suffice
    const bool until = f.is( formula_kind::until );
    const auto l = truth( f.lhs(), s, atom );
    const auto r = truth( f.rhs(), s, atom );
    v.assign( n, !until );
    for ( bool changed = true; changed; )
    {
      changed = false;
      for ( std::size_t j = n; j-- > 0; )
      {
        const bool next = v[ s.succ( j ) ];
        const bool x = until ? ( r[ j ] || ( l[ j ] && next ) ) : ( r[ j ] && ( l[ j ] || next ) );
        if ( x != v[ j ] )
        {
          v[ j ] = x;
          changed = true;
        }
      }
    }
    break;
  }
  }
  return v;
}

truth_table table( const std::vector<bool>& v, const shifted_lasso& s )
{
  return truth_table{ v, s.cycle };
}

} // namespace

bool truth_table::at( std::size_t position ) const
{
  if ( position < 1 )
    throw error( "invalid_position", "positions start at 1" );
  std::size_t k = position - 1;
  if ( k >= values.size() )
    k = values.size() - period + ( k - values.size() ) % period;
  return values[ k ];
}

truth_table eval_all( const hybrid_lasso_trace& trace, const formula& phi, double tol )
{
  trace.validate();
  const shifted_lasso s{ trace.prefix.size(), trace.cycle.size() };
  std::map<std::string, std::vector<bool>> flow_cache;
  const atom_fn atom = [ & ]( const formula& f, std::size_t j ) -> bool {
    if ( f.is( formula_kind::action_atom ) )
      return j > 0 && trace.at( s.original( j - 1 ) ).action == f.action_name();
    auto& cached = flow_cache[ f.atom().key() ];
    if ( cached.empty() )
    {
      cached.resize( trace.length() );
      for ( std::size_t i = 0; i < trace.length(); ++i )
        cached[ i ] = satisfies_flow( trace.at( i ).trajectory, f.atom().condition, tol );
    }
    return cached[ s.original( j ) ];
  };
  return table( truth( phi, s, atom ), s );
}

bool eval( const hybrid_lasso_trace& trace, const formula& phi, std::size_t position, double tol )
{
  return eval_all( trace, phi, tol ).at( position );
}

bool eval_word( const formula& phi, const std::vector<std::string>& prefix, const std::vector<std::string>& cycle,
                std::size_t position )
{
  if ( cycle.empty() )
    throw error( "invalid_trace", "lasso cycle must not be empty" );
  const shifted_lasso s{ prefix.size(), cycle.size() };
  auto letter = [ & ]( std::size_t i ) -> const std::string& {
    return i < prefix.size() ? prefix[ i ] : cycle[ i - prefix.size() ];
  };
  const atom_fn atom = [ & ]( const formula& f, std::size_t j ) -> bool {
    if ( f.is( formula_kind::flow_atom ) )
      throw error( "invalid_argument", "action words cannot decide flow atoms" );
    return j > 0 && letter( s.original( j - 1 ) ) == f.action_name();
  };
  return table( truth( phi, s, atom ), s ).at( position );
}

namespace
{

class walker
{
public:
  walker( const hybrid_automaton& h, std::uint64_t seed, const random_trace_options& options )
      : h_( h ), options_( options ), rng_( seed )
  {
    for ( const auto& l : h.locations )
      flows_.emplace_back( compile_flow( l.flow, h.variables ) );
  }

  std::optional<generated_trace> attempt()
  {
    std::vector<std::size_t> starts;
    for ( auto l : h_.initial )
      starts.push_back( l );
    if ( starts.empty() )
      throw error( "no_cycle", "no cycle found: the automaton has no initial location" );
    hybrid_state s{ pick( starts ), {} };
    if ( !initial_valuation( s ) )
      return std::nullopt;

    generated_trace out;
    const std::size_t prefix = uniform( 0, options_.max_prefix );
    const std::size_t cycle = uniform( options_.min_cycle, options_.max_cycle );
    for ( std::size_t i = 0; i < prefix; ++i )
      if ( !random_segment( s, out.trace.prefix, out.witness.prefix ) )
        return std::nullopt;
    const hybrid_state start = s;
    for ( std::size_t i = 0; i + 1 < cycle; ++i )
      if ( !random_segment( s, out.trace.cycle, out.witness.cycle ) )
        return std::nullopt;
    if ( !closing_segment( s, start, out.trace.cycle, out.witness.cycle ) )
      return std::nullopt;
    if ( !is_generated( out.trace, h_, out.witness, options_.tol ) )
      return std::nullopt;
    return out;
  }

private:
  std::size_t uniform( std::size_t lo, std::size_t hi )
  {
    return std::uniform_int_distribution<std::size_t>( lo, std::max( lo, hi ) )( rng_ );
  }

  template <typename T>
  const T& pick( const std::vector<T>& v )
  {
    return v[ uniform( 0, v.size() - 1 ) ];
  }

  bool initial_valuation( hybrid_state& s )
  {
    std::vector<constraint> cs = h_.locations[ s.loc ].init;
    for ( const auto& c : h_.locations[ s.loc ].flow )
      if ( !mentions( c, var_kind::dotted ) )
        cs.push_back( c );
    const box b = bounding_box( cs, h_.variables );
    for ( std::size_t i = 0; i < h_.variables.size(); ++i )
    {
      interval iv = b[ i ];
      if ( auto it = options_.initial.find( h_.variables[ i ] ); it != options_.initial.end() )
        iv = { std::max( iv.lo, it->second.lo ), std::min( iv.hi, it->second.hi ) };
      if ( !std::isfinite( iv.lo ) || !std::isfinite( iv.hi ) )
        throw error( "missing_initial_bounds", "initial value of '" + h_.variables[ i ] + "' is unbounded" );
      if ( iv.lo > iv.hi )
        return false;
      s.x[ h_.variables[ i ] ] = std::uniform_real_distribution<double>( iv.lo, iv.hi )( rng_ );
    }
    return admissible( h_, s.loc, s.x, options_.tol );
  }

  /// Samples of the flow from `s` while the state stays admissible.
  sampled_trajectory run( const hybrid_state& s ) const
  {
    const flow_propagator& p = flows_[ s.loc ];
    auto t = p.trajectory( s.x, options_.max_dwell, options_.step );
    std::size_t keep = 0;
    while ( keep < t.samples.size() && admissible( h_, s.loc, t.samples[ keep ], options_.tol ) )
      ++keep;
    t.samples.resize( keep );
    t.derivatives.resize( keep );
    return t;
  }

  bool random_segment( hybrid_state& s, std::vector<trace_step>& steps, std::vector<std::size_t>& witness )
  {
    const auto t = run( s );
    std::vector<std::pair<std::size_t, std::string>> enabled;
    for ( std::size_t k = 1; k < t.samples.size(); ++k )
      for ( const auto& a : h_.actions )
        if ( !discrete_step( h_, { s.loc, t.samples[ k ] }, a, options_.tol ).empty() )
          enabled.emplace_back( k, a );
    if ( enabled.empty() )
      return false;
    const auto [ k, a ] = pick( enabled );
    const auto next = discrete_step( h_, { s.loc, t.samples[ k ] }, a, options_.tol );
    std::vector<valuation> samples( t.samples.begin(), t.samples.begin() + static_cast<std::ptrdiff_t>( k + 1 ) );
    std::vector<valuation> ders( t.derivatives.begin(), t.derivatives.begin() + static_cast<std::ptrdiff_t>( k + 1 ) );
    steps.push_back( { sampled_trajectory::make( t.step, std::move( samples ), std::move( ders ) ), a } );
    witness.push_back( s.loc );
    s = pick( next );
    return true;
  }

  /// Largest deviation of the successor in `target` from `goal`, if any.
  std::optional<std::vector<double>> residual( std::size_t loc, const valuation& x, const std::string& a,
                                               const hybrid_state& goal ) const
  {
    if ( !admissible( h_, loc, x, options_.tol ) )
      return std::nullopt;
    for ( const auto& n : discrete_step( h_, { loc, x }, a, 1e-7 ) )
      if ( n.loc == goal.loc )
      {
        std::vector<double> r;
        for ( const auto& v : h_.variables )
          r.push_back( n.x.at( v ) - goal.x.at( v ) );
        return r;
      }
    return std::nullopt;
  }

  bool closing_segment( const hybrid_state& s, const hybrid_state& goal, std::vector<trace_step>& steps,
                        std::vector<std::size_t>& witness )
  {
    const auto t = run( s );
    const flow_propagator& p = flows_[ s.loc ];
    std::vector<std::pair<double, std::string>> hits;
    for ( const auto& a : h_.actions )
    {
      std::optional<std::vector<double>> prev;
      for ( std::size_t k = 1; k < t.samples.size(); ++k )
      {
        auto cur = residual( s.loc, t.samples[ k ], a, goal );
        if ( prev && cur )
          if ( auto root = bracket( p, s, a, goal, t.step * static_cast<double>( k - 1 ),
                                    t.step * static_cast<double>( k ), *prev, *cur ) )
            hits.emplace_back( *root, a );
        prev = cur;
      }
    }
    if ( hits.empty() )
      return false;
    const auto [ when, a ] = pick( hits );
    auto traj = p.trajectory( s.x, when, options_.step );
    if ( !residual( s.loc, traj.lstate(), a, goal ) )
      return false;
    steps.push_back( { std::move( traj ), a } );
    witness.push_back( s.loc );
    return true;
  }

  /// Time in [t0, t1] where every residual vanishes, found by bisection on
  /// the first component that changes sign.
  std::optional<double> bracket( const flow_propagator& p, const hybrid_state& s, const std::string& a,
                                 const hybrid_state& goal, double t0, double t1, std::vector<double> r0,
                                 const std::vector<double>& r1 ) const
  {
    std::optional<std::size_t> pivot;
    for ( std::size_t i = 0; i < r0.size(); ++i )
    {
      const bool flat = std::abs( r0[ i ] ) <= options_.tol && std::abs( r1[ i ] ) <= options_.tol;
      if ( flat )
        continue;
      if ( ( r0[ i ] < 0 ) == ( r1[ i ] < 0 ) && r1[ i ] != 0.0 )
        return std::nullopt;
      if ( !pivot )
        pivot = i;
    }
    if ( !pivot )
      return t1;
    for ( int it = 0; it < 100 && t1 - t0 > 1e-13; ++it )
    {
      const double mid = 0.5 * ( t0 + t1 );
      const auto r = residual( s.loc, p.state( s.x, mid ), a, goal );
      if ( !r )
        return std::nullopt;
      if ( ( ( *r )[ *pivot ] < 0 ) == ( r0[ *pivot ] < 0 ) )
      {
        t0 = mid;
        r0 = *r;
      }
      else
        t1 = mid;
    }
    const auto r = residual( s.loc, p.state( s.x, t1 ), a, goal );
    if ( !r || std::any_of( r->begin(), r->end(), [ & ]( double d ) { return std::abs( d ) > options_.tol; } ) )
      return std::nullopt;
    return t1;
  }

  const hybrid_automaton& h_;
  random_trace_options options_;
  std::mt19937_64 rng_;
  std::vector<flow_propagator> flows_;
};

} // namespace

generated_trace random_trace( const hybrid_automaton& h, std::uint64_t seed, const random_trace_options& options )
{
  if ( h.edges.empty() )
    throw error( "no_cycle", "no cycle found: the automaton has no edges" );
  walker w( h, seed, options );
  for ( std::size_t i = 1; i <= options.attempts; ++i )
    if ( auto t = w.attempt() )
    {
      t->attempts = i;
      return *t;
    }
  throw error( "no_cycle", "no cycle found within " + std::to_string( options.attempts ) + " attempts" );
}

} // namespace hyltl
