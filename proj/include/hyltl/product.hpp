#pragma once

#include "hyltl/hybrid.hpp"
#include "hyltl/reach.hpp"
#include "hyltl/tableau.hpp"

#include <string>
#include <vector>

namespace hyltl
{

struct check_options
{
  reach_options reach;
  /// Tolerance of the y = x test of the query.
  double eps = 1e-6;
  /// Witness variable stored in y; empty selects the first variable in
  /// lexicographic order.
  std::string witness;
  /// Store every variable rather than one.
  bool witness_all = false;
  /// Reject negated flow atoms without complement and put complements into
  /// the formula automaton's flows.
  bool strict = false;
  bool prune = true;
};

/// System composed with the automaton of the negated property.
hybrid_automaton negate_and_build( const formula& phi, const hybrid_automaton& system, const check_options& options = {},
                                   std::vector<std::string>* warnings = nullptr );

/// Counter construction; families with at most one set are returned as is.
hybrid_automaton degeneralize( const hybrid_automaton& h );

struct instrumented_automaton
{
  hybrid_automaton automaton;
  std::string flag;
  std::vector<std::string> stores;
  /// Final location and its code.
  std::vector<std::pair<std::size_t, double>> codes;
  reach_query query;
  std::vector<std::string> warnings;
};

/// Add the guessing variables: on leaving a final location the run may
/// record the location's code and the witness value once; the query asks
/// whether the same location is met again with the same value. An empty
/// acceptance family makes every location final.
instrumented_automaton instrument( const hybrid_automaton& h, const check_options& options = {} );

enum class outcome
{
  verified,
  inconclusive
};

struct verdict
{
  outcome result = outcome::verified;
  std::vector<query_hit> hits;
  std::vector<std::string> hit_locations;
  std::vector<std::string> variables;
  std::string reason;
  std::vector<std::string> warnings;
  std::size_t product_locations = 0;
  std::size_t pruned_locations = 0;
  std::size_t instrumented_locations = 0;
  std::size_t reached_boxes = 0;
  std::size_t phases = 0;
  bool horizon_bounded = false;
  double horizon = 0.0;
  double step = 0.0;
  double seconds = 0.0;
};

std::string to_string( outcome o );

verdict check( const formula& phi, const hybrid_automaton& system, const check_options& options = {} );

} // namespace hyltl
