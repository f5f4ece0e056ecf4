#pragma once

#include "hyltl/bitset.hpp"
#include "hyltl/closure.hpp"
#include "hyltl/hybrid.hpp"

namespace hyltl
{

struct tableau_options
{
  /// Also put the complement of every negated flow atom of a location
  /// into its flow.
  bool strict = false;
};

/// Automaton of a formula together with the consistent set behind each
/// location.
struct formula_automaton
{
  hybrid_automaton automaton;
  closure_set closure;
  std::vector<bitset> sets;
};

/// Locations are named `M_<hex of the set's bit vector>`.
formula_automaton build_formula_automaton( const formula& f, const std::vector<std::string>& variables,
                                           const std::vector<std::string>& actions, const declarations& decl = {},
                                           const tableau_options& options = {} );

/// Drop locations that are unreachable or cannot reach an accepting cycle.
hybrid_automaton prune_unreachable( const hybrid_automaton& h );
formula_automaton prune_unreachable( const formula_automaton& fa );

} // namespace hyltl
