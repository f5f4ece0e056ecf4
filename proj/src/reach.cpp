#include "hyltl/reach.hpp"

#include "hyltl/error.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

namespace hyltl
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

box add_scaled( const box& b, const interval& k, const box& d )
{
  box out( b.size() );
  for ( std::size_t i = 0; i < b.size(); ++i )
    out[ i ] = b[ i ] + k * d[ i ];
  return out;
}

box inflate( const box& b )
{
  box out = b;
  for ( std::size_t i = 0; i < b.size(); ++i )
  {
    const double w = b[ i ].bounded() ? b[ i ].width() : 0.0;
    const double pad = 0.1 * w + 1e-9 * ( 1.0 + std::max( std::abs( b[ i ].lo ), std::abs( b[ i ].hi ) ) );
    out[ i ] = { round_down( b[ i ].lo - pad ), round_up( b[ i ].hi + pad ) };
    if ( std::isnan( out[ i ].lo ) )
      out[ i ].lo = -inf;
    if ( std::isnan( out[ i ].hi ) )
      out[ i ].hi = inf;
  }
  return out;
}

} // namespace

flow_step_result flow_step( const compiled_flow& flow, const box& b, double h )
{
  const interval span{ 0.0, h };
  auto within = [ & ]( const box& e ) { return flow.contract( e ).value_or( b ); };

  // a priori enclosure: E with b + [0,h] D(E within the invariant) inside E
  box e = inflate( add_scaled( b, span, flow.derivative( b ) ) );
  bool valid = false;
  for ( int iter = 0; iter < 12 && !valid; ++iter )
  {
    const box y = add_scaled( b, span, flow.derivative( within( e ) ) );
    if ( y.subset_of( e ) )
    {
      e = y;
      valid = true;
    }
    else
      e = inflate( hull( e, y ) );
  }
  if ( !valid )
    e = box::entire( b.size() );
  const box segment = within( e );
  const box d = flow.derivative( segment );

  box end( b.size() );
  const interval hh = interval::point( h );
  const interval half_h2 = interval::point( h ) * interval::point( h ) * interval::point( 0.5 );
  for ( std::size_t i = 0; i < b.size(); ++i )
  {
    if ( flow.modes[ i ] != derivative_mode::affine )
    {
      end[ i ] = b[ i ] + hh * d[ i ];
      continue;
    }
    const auto ii = static_cast<Eigen::Index>( i );
    // (I + hA) b + h c + h^2/2 A D
    interval lin = ( interval::point( 1.0 ) + hh * interval::point( flow.a( ii, ii ) ) ) * b[ i ];
    interval second = interval::point( 0.0 );
    for ( std::size_t j = 0; j < b.size(); ++j )
    {
      const double aij = flow.a( ii, static_cast<Eigen::Index>( j ) );
      if ( aij == 0.0 )
        continue;
      if ( j != i )
        lin = lin + hh * interval::point( aij ) * b[ j ];
      second = second + scale( aij, d[ j ] );
    }
    if ( flow.c( ii ) != 0.0 )
      lin = lin + hh * interval::point( flow.c( ii ) );
    end[ i ] = lin + half_h2 * second;
  }
  // the end state is also inside the enclosure
  auto clipped = intersect( end, segment );
  flow_step_result r{ segment, std::nullopt };
  if ( clipped )
    r.end = flow.contract( *clipped );
  return r;
}

std::optional<box> flow_post( const compiled_flow& flow, const box& b, double h )
{
  return flow_step( flow, b, h ).end;
}

std::optional<box> jump_post( const compiled_jump& jump, const box& b )
{
  return jump.image( b );
}

std::size_t region_set::box_count() const
{
  std::size_t n = 0;
  for ( const auto& v : boxes )
    n += v.size();
  return n;
}

void region_set::reduce()
{
  for ( auto& v : boxes )
  {
    std::vector<box> kept;
    // larger boxes first so that contained ones are caught in one sweep
    std::vector<std::size_t> order( v.size() );
    for ( std::size_t i = 0; i < v.size(); ++i )
      order[ i ] = i;
    std::stable_sort( order.begin(), order.end(),
                      [ & ]( std::size_t a, std::size_t b ) { return v[ a ].volume() > v[ b ].volume(); } );
    std::vector<bool> keep( v.size(), true );
    for ( std::size_t oi = 0; oi < order.size(); ++oi )
    {
      const std::size_t i = order[ oi ];
      for ( std::size_t oj = 0; oj < oi && keep[ i ]; ++oj )
      {
        const std::size_t j = order[ oj ];
        if ( keep[ j ] && v[ i ].subset_of( v[ j ] ) )
          keep[ i ] = false;
      }
    }
    for ( std::size_t i = 0; i < v.size(); ++i )
      if ( keep[ i ] )
        kept.push_back( v[ i ] );
    v = std::move( kept );
  }
}

std::optional<box> region_set::hull_of( std::size_t loc ) const
{
  std::optional<box> out;
  for ( const auto& b : boxes[ loc ] )
    out = out ? hull( *out, b ) : b;
  return out;
}

bool region_set::contains( std::size_t loc, const valuation& x ) const
{
  for ( const auto& b : boxes[ loc ] )
  {
    bool in = true;
    for ( std::size_t i = 0; i < variables.size() && in; ++i )
      in = b[ i ].contains( x.at( variables[ i ] ) );
    if ( in )
      return true;
  }
  return false;
}

std::string region_set::to_csv() const
{
  std::ostringstream out;
  out.precision( 17 );
  out << "location,box,variable,lo,hi\n";
  for ( std::size_t l = 0; l < locations.size(); ++l )
    for ( std::size_t k = 0; k < boxes[ l ].size(); ++k )
      for ( std::size_t i = 0; i < variables.size(); ++i )
        out << locations[ l ] << "," << k << "," << variables[ i ] << "," << boxes[ l ][ k ][ i ].lo << ","
            << boxes[ l ][ k ][ i ].hi << "\n";
  return out.str();
}

std::optional<box> initial_box( const hybrid_automaton& h, std::size_t loc )
{
  std::vector<constraint> cs = h.locations[ loc ].init;
  for ( const auto& c : h.locations[ loc ].flow )
    if ( !mentions( c, var_kind::dotted ) )
      cs.push_back( c );
  return contract( box::entire( h.variables.size() ), cs, h.variables );
}

region_set reachable( const hybrid_automaton& h, const reach_options& options )
{
  if ( !( options.step > 0.0 ) || !( options.horizon > 0.0 ) )
    throw error( "invalid_argument", "step and horizon must be positive" );

  const std::size_t nl = h.locations.size();
  region_set r;
  r.variables = h.variables;
  for ( const auto& l : h.locations )
    r.locations.push_back( l.name );
  r.boxes.resize( nl );
  r.step = options.step;
  r.horizon = options.horizon;

  std::vector<compiled_flow> flows;
  for ( const auto& l : h.locations )
    flows.push_back( compile_flow( l.flow, h.variables ) );
  std::vector<compiled_jump> jumps;
  std::vector<std::vector<std::size_t>> outgoing( nl );
  for ( std::size_t k = 0; k < h.edges.size(); ++k )
  {
    jumps.push_back( compile_jump( h.edges[ k ].jump, h.variables ) );
    outgoing[ h.edges[ k ].source ].push_back( k );
  }

  std::deque<std::pair<std::size_t, box>> work;
  for ( auto l : h.initial )
    if ( auto b = initial_box( h, l ) )
    {
      if ( options.require_bounded_init &&
           std::any_of( b->dims().begin(), b->dims().end(), []( const interval& i ) { return !i.bounded(); } ) )
        throw error( "missing_initial_bounds", "initial region of '" + h.locations[ l ].name + "' is unbounded" );
      work.emplace_back( l, *b );
    }

  std::vector<std::vector<box>> starts( nl );
  std::vector<std::size_t> visits( nl, 0 );
  const auto max_steps = static_cast<std::size_t>( std::ceil( options.horizon / options.step - 1e-9 ) );

  while ( !work.empty() )
  {
    auto [ l, incoming ] = std::move( work.front() );
    work.pop_front();
    auto start = flows[ l ].contract( incoming );
    if ( !start )
      continue;
    if ( std::any_of( starts[ l ].begin(), starts[ l ].end(), [ & ]( const box& s ) { return start->subset_of( s ); } ) )
      continue;
    if ( ++visits[ l ] > options.widen_after )
      for ( const auto& s : starts[ l ] )
        *start = hull( *start, s );
    starts[ l ].push_back( *start );
    if ( ++r.phases > options.max_phases )
    {
      r.complete = false;
      break;
    }

    std::vector<std::optional<box>> exits( outgoing[ l ].size() );
    box cur = *start;
    for ( std::size_t step = 0;; ++step )
    {
      const auto fs = flow_step( flows[ l ], cur, options.step );
      r.boxes[ l ].push_back( fs.segment );
      for ( std::size_t k = 0; k < outgoing[ l ].size(); ++k )
        if ( auto img = jumps[ outgoing[ l ][ k ] ].image( fs.segment ) )
          exits[ k ] = exits[ k ] ? hull( *exits[ k ], *img ) : *img;
      if ( !fs.end )
        break;
      if ( fs.end->subset_of( cur ) || fs.end->subset_of( *start ) )
        break;
      if ( step + 1 >= max_steps )
      {
        r.horizon_bounded = true;
        break;
      }
      cur = *fs.end;
    }
    for ( std::size_t k = 0; k < outgoing[ l ].size(); ++k )
      if ( exits[ k ] )
        work.emplace_back( h.edges[ outgoing[ l ][ k ] ].target, *exits[ k ] );
  }
  r.reduce();
  return r;
}

std::vector<query_hit> query( const region_set& r, const reach_query& q )
{
  std::vector<query_hit> hits;
  const interval tol{ -q.eps, q.eps };
  for ( const auto& t : q.targets )
    for ( const auto& b : r.boxes[ t.loc ] )
    {
      if ( !b[ q.flag ].contains( t.code ) )
        continue;
      bool ok = true;
      for ( const auto& [ y, x ] : q.pairs )
        ok = ok && overlaps( b[ y ] - b[ x ], tol );
      if ( ok )
        hits.push_back( { t.loc, b } );
    }
  return hits;
}

} // namespace hyltl
