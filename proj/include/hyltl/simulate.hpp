#pragma once

#include "hyltl/dynamics.hpp"
#include "hyltl/hybrid.hpp"

#include <Eigen/Dense>

namespace hyltl
{

/// Exact propagation of affine flows. Rectangular derivatives with
/// constant bounds follow the midpoint of the bounds (or the single bound
/// when one side is open); unconstrained derivatives are zero.
class flow_propagator
{
public:
  /// Throws `unsupported_dynamics` for state-dependent inclusions.
  explicit flow_propagator( compiled_flow flow );

  const std::vector<std::string>& variables() const { return flow_.variables; }
  valuation state( const valuation& x0, double t ) const;
  valuation derivative( const valuation& x ) const;

  /// Samples on [0, duration]; the step is shrunk so that the last sample
  /// falls exactly on `duration`.
  sampled_trajectory trajectory( const valuation& x0, double duration, double step ) const;

private:
  Eigen::VectorXd to_vector( const valuation& x ) const;
  valuation to_valuation( const Eigen::VectorXd& v ) const;
  /// Transition matrix of the augmented system over time t.
  Eigen::MatrixXd transition( double t ) const;

  compiled_flow flow_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd c_;
};

} // namespace hyltl
