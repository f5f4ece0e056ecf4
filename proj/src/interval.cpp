#include "hyltl/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hyltl
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

// Directed rounding from the error-free transformations: the residual of
// an add/mul/div tells us on which side of the exact result the rounded
// value landed, so exact operations stay exact.

double add_down( double a, double b )
{
  const double s = a + b;
  if ( !std::isfinite( s ) )
    return s;
  const double bb = s - a;
  const double err = ( a - ( s - bb ) ) + ( b - bb );
  return err < 0 ? std::nextafter( s, -inf ) : s;
}

double add_up( double a, double b )
{
  const double s = a + b;
  if ( !std::isfinite( s ) )
    return s;
  const double bb = s - a;
  const double err = ( a - ( s - bb ) ) + ( b - bb );
  return err > 0 ? std::nextafter( s, inf ) : s;
}

double mul_down( double a, double b )
{
  if ( a == 0.0 || b == 0.0 )
    return 0.0;
  const double p = a * b;
  if ( !std::isfinite( p ) )
    return p;
  const double err = std::fma( a, b, -p );
  return err < 0 ? std::nextafter( p, -inf ) : p;
}

double mul_up( double a, double b )
{
  if ( a == 0.0 || b == 0.0 )
    return 0.0;
  const double p = a * b;
  if ( !std::isfinite( p ) )
    return p;
  const double err = std::fma( a, b, -p );
  return err > 0 ? std::nextafter( p, inf ) : p;
}

// sign of (exact a/b - q)
int div_residual_sign( double a, double b, double q )
{
  if ( !std::isfinite( q ) || !std::isfinite( a ) || !std::isfinite( b ) )
    return 0;
  const double r = std::fma( -q, b, a );
  if ( r == 0.0 )
    return 0;
  return ( ( r > 0 ) == ( b > 0 ) ) ? 1 : -1;
}

double div_down( double a, double b )
{
  if ( a == 0.0 )
    return 0.0;
  const double q = a / b;
  return div_residual_sign( a, b, q ) < 0 ? std::nextafter( q, -inf ) : q;
}

double div_up( double a, double b )
{
  if ( a == 0.0 )
    return 0.0;
  const double q = a / b;
  return div_residual_sign( a, b, q ) > 0 ? std::nextafter( q, inf ) : q;
}

// libm transcendental results are not correctly rounded; two ulps of slack.
double widen_down( double v )
{
  return std::nextafter( std::nextafter( v, -inf ), -inf );
}

double widen_up( double v )
{
  return std::nextafter( std::nextafter( v, inf ), inf );
}

// true when some point p + 2k*pi lies in [lo, hi]
bool contains_phase( double lo, double hi, double p )
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double k = std::ceil( ( lo - p ) / two_pi - 1e-12 );
  return p + k * two_pi <= hi + 1e-12;
}

} // namespace

interval interval::entire()
{
  return { -inf, inf };
}

bool interval::bounded() const
{
  return std::isfinite( lo ) && std::isfinite( hi );
}

double round_down( double v )
{
  return std::isfinite( v ) ? std::nextafter( v, -inf ) : v;
}

double round_up( double v )
{
  return std::isfinite( v ) ? std::nextafter( v, inf ) : v;
}

interval operator+( const interval& a, const interval& b )
{
  return { add_down( a.lo, b.lo ), add_up( a.hi, b.hi ) };
}

interval operator-( const interval& a )
{
  return { -a.hi, -a.lo };
}

interval operator-( const interval& a, const interval& b )
{
  return a + ( -b );
}

interval operator*( const interval& a, const interval& b )
{
  const double lo = std::min( { mul_down( a.lo, b.lo ), mul_down( a.lo, b.hi ), mul_down( a.hi, b.lo ),
                                mul_down( a.hi, b.hi ) } );
  const double hi =
      std::max( { mul_up( a.lo, b.lo ), mul_up( a.lo, b.hi ), mul_up( a.hi, b.lo ), mul_up( a.hi, b.hi ) } );
  return { lo, hi };
}

interval operator/( const interval& a, const interval& b )
{
  if ( a.lo == 0.0 && a.hi == 0.0 )
    return interval::point( 0.0 );
  if ( b.contains( 0.0 ) )
    return interval::entire();
  const double lo = std::min( { div_down( a.lo, b.lo ), div_down( a.lo, b.hi ), div_down( a.hi, b.lo ),
                                div_down( a.hi, b.hi ) } );
  const double hi =
      std::max( { div_up( a.lo, b.lo ), div_up( a.lo, b.hi ), div_up( a.hi, b.lo ), div_up( a.hi, b.hi ) } );
  return { lo, hi };
}

interval scale( double k, const interval& a )
{
  if ( k == 1.0 )
    return a;
  return interval::point( k ) * a;
}

interval sin( const interval& a )
{
  constexpr double pi = std::numbers::pi;
  if ( !a.bounded() || a.width() >= 2.0 * pi )
    return { -1.0, 1.0 };
  double lo = std::min( std::sin( a.lo ), std::sin( a.hi ) );
  double hi = std::max( std::sin( a.lo ), std::sin( a.hi ) );
  if ( contains_phase( a.lo, a.hi, pi / 2 ) )
    hi = 1.0;
  if ( contains_phase( a.lo, a.hi, -pi / 2 ) )
    lo = -1.0;
  return { std::max( -1.0, widen_down( lo ) ), std::min( 1.0, widen_up( hi ) ) };
}

interval cos( const interval& a )
{
  constexpr double pi = std::numbers::pi;
  if ( !a.bounded() || a.width() >= 2.0 * pi )
    return { -1.0, 1.0 };
  double lo = std::min( std::cos( a.lo ), std::cos( a.hi ) );
  double hi = std::max( std::cos( a.lo ), std::cos( a.hi ) );
  if ( contains_phase( a.lo, a.hi, 0.0 ) )
    hi = 1.0;
  if ( contains_phase( a.lo, a.hi, pi ) )
    lo = -1.0;
  return { std::max( -1.0, widen_down( lo ) ), std::min( 1.0, widen_up( hi ) ) };
}

interval exp( const interval& a )
{
  const double lo = a.lo == -inf ? 0.0 : std::max( 0.0, widen_down( std::exp( a.lo ) ) );
  const double hi = a.hi == inf ? inf : widen_up( std::exp( a.hi ) );
  return { lo, hi };
}

interval hull( const interval& a, const interval& b )
{
  if ( a.is_empty() )
    return b;
  if ( b.is_empty() )
    return a;
  return { std::min( a.lo, b.lo ), std::max( a.hi, b.hi ) };
}

interval intersect( const interval& a, const interval& b )
{
  return { std::max( a.lo, b.lo ), std::min( a.hi, b.hi ) };
}

bool overlaps( const interval& a, const interval& b )
{
  return !intersect( a, b ).is_empty();
}

std::string to_string( const interval& a )
{
  std::ostringstream os;
  os.precision( 17 );
  os << '[' << a.lo << ", " << a.hi << ']';
  return os.str();
}

box::box( std::size_t dims ) : dims_( dims, interval::point( 0.0 ) ) {}

box box::entire( std::size_t dims )
{
  return box( std::vector<interval>( dims, interval::entire() ) );
}

bool box::is_empty() const
{
  return std::any_of( dims_.begin(), dims_.end(), []( const interval& i ) { return i.is_empty(); } );
}

bool box::subset_of( const box& other ) const
{
  for ( std::size_t i = 0; i < dims_.size(); ++i )
    if ( !dims_[ i ].subset_of( other.dims_[ i ] ) )
      return false;
  return true;
}

bool box::overlaps( const box& other ) const
{
  for ( std::size_t i = 0; i < dims_.size(); ++i )
    if ( !hyltl::overlaps( dims_[ i ], other.dims_[ i ] ) )
      return false;
  return true;
}

double box::volume() const
{
  double v = 1.0;
  for ( const auto& d : dims_ )
  {
    if ( d.width() == 0.0 )
      return 0.0;
    v *= d.width();
  }
  return v;
}

box hull( const box& a, const box& b )
{
  std::vector<interval> dims( a.size() );
  for ( std::size_t i = 0; i < a.size(); ++i )
    dims[ i ] = hull( a[ i ], b[ i ] );
  return box( std::move( dims ) );
}

std::optional<box> intersect( const box& a, const box& b )
{
  std::vector<interval> dims( a.size() );
  for ( std::size_t i = 0; i < a.size(); ++i )
  {
    dims[ i ] = intersect( a[ i ], b[ i ] );
    if ( dims[ i ].is_empty() )
      return std::nullopt;
  }
  return box( std::move( dims ) );
}

} // namespace hyltl
