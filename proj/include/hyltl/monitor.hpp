#pragma once

#include "hyltl/formula.hpp"
#include "hyltl/hybrid.hpp"
#include "hyltl/interval.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hyltl
{

/// Truth of `phi` at 1-based position `position` of the lasso trace. Flow
/// atoms hold on a segment when every sample satisfies them; action atoms
/// read the action preceding the segment.
bool eval( const hybrid_lasso_trace& trace, const formula& phi, std::size_t position = 1,
           double tol = default_tolerance );

/// Truth values at every position of one unrolled period. Index k is
/// position k + 1; positions past the end repeat the last `period` entries.
struct truth_table
{
  std::vector<bool> values;
  std::size_t period = 0;

  bool at( std::size_t position ) const;
};

truth_table eval_all( const hybrid_lasso_trace& trace, const formula& phi, double tol = default_tolerance );

/// Action-only evaluation over the word `prefix cycle^omega`, where the
/// i-th letter is the action taken after position i. Throws for flow atoms.
bool eval_word( const formula& phi, const std::vector<std::string>& prefix, const std::vector<std::string>& cycle,
                std::size_t position = 1 );

struct random_trace_options
{
  std::size_t max_prefix = 3;
  std::size_t min_cycle = 1;
  std::size_t max_cycle = 4;
  double step = 0.01;
  /// Longest time spent in one location.
  double max_dwell = 30.0;
  /// Bounds for initial values the model leaves open.
  std::map<std::string, interval> initial;
  std::size_t attempts = 500;
  double tol = default_tolerance;
};

struct generated_trace
{
  hybrid_lasso_trace trace;
  lasso_witness witness;
  std::size_t attempts = 0;
};

/// Seeded random walk through `h` whose last segment is steered back to
/// the state at the start of the cycle. Throws `no_cycle` when no lasso is
/// found within the attempt budget.
generated_trace random_trace( const hybrid_automaton& h, std::uint64_t seed, const random_trace_options& options = {} );

} // namespace hyltl
