#pragma once

// Flow and jump constraints compiled against a fixed variable order, for
// the box reachability engine and the simulator.

#include "hyltl/expr.hpp"
#include "hyltl/interval.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace hyltl
{

enum class derivative_mode : unsigned char
{
  /// der(x) = a.x + c
  affine,
  /// der(x) bounded by expressions of the state
  inclusion,
  /// no constraint on der(x)
  free
};

struct derivative_bound
{
  /// le, ge or eq
  relation rel = relation::eq;
  expr bound;
};

struct compiled_flow
{
  std::vector<std::string> variables;
  std::vector<derivative_mode> modes;
  /// Rows are meaningful for affine variables only.
  Eigen::MatrixXd a;
  Eigen::VectorXd c;
  std::vector<std::vector<derivative_bound>> bounds;
  std::vector<constraint> invariants;

  bool all_affine() const;
  /// Enclosure of the derivative over every state of `b`.
  box derivative( const box& b ) const;
  /// `b` intersected with the invariants; nullopt when certainly empty.
  std::optional<box> contract( const box& b ) const;
};

/// Throws `unsupported_dynamics` for constraints relating several
/// derivatives.
compiled_flow compile_flow( const std::vector<constraint>& flow, const std::vector<std::string>& variables );

struct compiled_jump
{
  struct assignment
  {
    std::size_t var = 0;
    expr value;
  };

  std::vector<std::string> variables;
  std::vector<constraint> guards;
  std::vector<assignment> assignments;
  /// Constraints over primed variables only, rewritten to plain ones.
  std::vector<constraint> post;

  /// Image of the guard-satisfying part of `b`; nullopt when empty.
  std::optional<box> image( const box& b ) const;
};

/// Throws `unsupported_reset` for constraints mixing primed and plain
/// variables in any other shape than `x' = f(X)`.
compiled_jump compile_jump( const std::vector<constraint>& jump, const std::vector<std::string>& variables );

/// Tighten `b` by the derivative-free constraints `cs` over `variables`.
/// Nonlinear constraints only prune boxes that certainly violate them.
std::optional<box> contract( const box& b, const std::vector<constraint>& cs, const std::vector<std::string>& variables );

/// Box of points satisfying simple bounds in `cs`; unconstrained
/// directions stay unbounded.
box bounding_box( const std::vector<constraint>& cs, const std::vector<std::string>& variables );

} // namespace hyltl
