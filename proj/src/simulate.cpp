#include "hyltl/simulate.hpp"

#include "hyltl/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace hyltl
{

flow_propagator::flow_propagator( compiled_flow flow ) : flow_( std::move( flow ) )
{
  const auto n = static_cast<Eigen::Index>( flow_.variables.size() );
  a_ = Eigen::MatrixXd::Zero( n, n );
  c_ = Eigen::VectorXd::Zero( n );
  for ( Eigen::Index i = 0; i < n; ++i )
  {
    const auto ui = static_cast<std::size_t>( i );
    switch ( flow_.modes[ ui ] )
    {
    case derivative_mode::affine:
      a_.row( i ) = flow_.a.row( i );
      c_( i ) = flow_.c( i );
      break;
    case derivative_mode::inclusion:
    {
      double lo = -INFINITY, hi = INFINITY;
      for ( const auto& b : flow_.bounds[ ui ] )
      {
        const auto lf = linearize( b.bound );
        if ( !lf || !lf->is_constant() )
          throw error( "unsupported_dynamics",
                       "cannot simulate the state-dependent inclusion on der(" + flow_.variables[ ui ] + ")" );
        if ( b.rel != relation::ge )
          hi = std::min( hi, lf->constant );
        if ( b.rel != relation::le )
          lo = std::max( lo, lf->constant );
      }
      c_( i ) = std::isfinite( lo ) && std::isfinite( hi ) ? 0.5 * ( lo + hi ) : std::isfinite( lo ) ? lo : hi;
      break;
    }
    case derivative_mode::free:
      break;
    }
  }
}

Eigen::VectorXd flow_propagator::to_vector( const valuation& x ) const
{
  Eigen::VectorXd v( static_cast<Eigen::Index>( flow_.variables.size() ) );
  for ( std::size_t i = 0; i < flow_.variables.size(); ++i )
  {
    auto it = x.find( flow_.variables[ i ] );
    if ( it == x.end() )
      throw error( "unknown_variable", "valuation misses variable '" + flow_.variables[ i ] + "'" );
    v( static_cast<Eigen::Index>( i ) ) = it->second;
  }
  return v;
}

valuation flow_propagator::to_valuation( const Eigen::VectorXd& v ) const
{
  valuation x;
  for ( std::size_t i = 0; i < flow_.variables.size(); ++i )
    x[ flow_.variables[ i ] ] = v( static_cast<Eigen::Index>( i ) );
  return x;
}

Eigen::MatrixXd flow_propagator::transition( double t ) const
{
  const auto n = a_.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero( n + 1, n + 1 );
  m.topLeftCorner( n, n ) = a_ * t;
  m.topRightCorner( n, 1 ) = c_ * t;
  return m.exp();
}

valuation flow_propagator::state( const valuation& x0, double t ) const
{
  const auto n = a_.rows();
  const Eigen::MatrixXd e = transition( t );
  return to_valuation( e.topLeftCorner( n, n ) * to_vector( x0 ) + e.topRightCorner( n, 1 ) );
}

valuation flow_propagator::derivative( const valuation& x ) const
{
  return to_valuation( a_ * to_vector( x ) + c_ );
}

sampled_trajectory flow_propagator::trajectory( const valuation& x0, double duration, double step ) const
{
  if ( !( duration > 0.0 ) || !( step > 0.0 ) )
    throw error( "invalid_trajectory", "duration and step must be positive" );
  const auto count = std::max<std::size_t>( 1, static_cast<std::size_t>( std::ceil( duration / step - 1e-9 ) ) );
  const double h = duration / static_cast<double>( count );
  const auto n = a_.rows();
  const Eigen::MatrixXd e = transition( h );
  const Eigen::MatrixXd phi = e.topLeftCorner( n, n );
  const Eigen::VectorXd psi = e.topRightCorner( n, 1 );

  std::vector<valuation> samples, derivatives;
  Eigen::VectorXd v = to_vector( x0 );
  for ( std::size_t k = 0; k <= count; ++k )
  {
    samples.push_back( to_valuation( v ) );
    derivatives.push_back( to_valuation( a_ * v + c_ ) );
    v = phi * v + psi;
  }
  return sampled_trajectory::make( h, std::move( samples ), std::move( derivatives ) );
}

} // namespace hyltl
