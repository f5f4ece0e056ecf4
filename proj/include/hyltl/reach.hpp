#pragma once

#include "hyltl/dynamics.hpp"
#include "hyltl/hybrid.hpp"
#include "hyltl/interval.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hyltl
{

struct reach_options
{
  double step = 0.01;
  /// Time bound of every continuous phase.
  double horizon = 100.0;
  /// Start boxes of a location are hulled after this many visits.
  std::size_t widen_after = 16;
  /// Hard cap on continuous phases; hitting it makes the result incomplete.
  std::size_t max_phases = 20000;
  /// Reject initial regions with unbounded directions.
  bool require_bounded_init = false;
};

/// Boxes reached per location, covering every state visited within the
/// horizon of each phase.
struct region_set
{
  std::vector<std::string> variables;
  std::vector<std::string> locations;
  std::vector<std::vector<box>> boxes;
  double step = 0.0;
  double horizon = 0.0;
  /// False when the phase cap stopped the exploration.
  bool complete = true;
  /// Some phase was cut at the horizon rather than converging.
  bool horizon_bounded = false;
  std::size_t phases = 0;

  std::size_t box_count() const;
  /// Drop boxes contained in another box of the same location.
  void reduce();
  /// Hull of all boxes of a location, if any.
  std::optional<box> hull_of( std::size_t loc ) const;
  bool contains( std::size_t loc, const valuation& x ) const;
  /// `location,box,variable,lo,hi` rows.
  std::string to_csv() const;
};

struct flow_step_result
{
  /// Enclosure of the states over [0, h] within the invariant.
  box segment;
  /// States at time h within the invariant; nullopt when the flow has
  /// certainly left it.
  std::optional<box> end;
};

/// One validated integration step from `b`, which must satisfy the
/// invariant.
flow_step_result flow_step( const compiled_flow& flow, const box& b, double h );

/// End box of a single step, the `flow_step` end box.
std::optional<box> flow_post( const compiled_flow& flow, const box& b, double h );

std::optional<box> jump_post( const compiled_jump& jump, const box& b );

/// Initial box of a location: its init region within its invariants.
std::optional<box> initial_box( const hybrid_automaton& h, std::size_t loc );

region_set reachable( const hybrid_automaton& h, const reach_options& options = {} );

/// States at final location `loc` with `f` equal to `code` and every
/// `(y, x)` pair within `eps`.
struct reach_query
{
  struct target
  {
    std::size_t loc;
    double code;
  };
  std::vector<target> targets;
  std::size_t flag = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double eps = 1e-6;
};

struct query_hit
{
  std::size_t loc;
  box region;
};

std::vector<query_hit> query( const region_set& r, const reach_query& q );

} // namespace hyltl
