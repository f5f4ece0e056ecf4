#pragma once

#include "hyltl/bitset.hpp"
#include "hyltl/formula.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyltl
{

/// Remove double negations and fold `!true`/`!false` everywhere.
formula normalize( const formula& f );

/// Negation with `!!f == f`, `!true == false` and `!false == true`.
formula negate( const formula& f );

/// Closure of a formula over an action alphabet, in deterministic
/// insertion order. Every member's negation is also a member.
class closure_set
{
public:
  closure_set( const formula& phi, std::vector<std::string> actions );

  std::size_t size() const { return elements_.size(); }
  const formula& at( std::size_t i ) const { return elements_[ i ]; }
  const std::vector<formula>& elements() const { return elements_; }
  std::optional<std::size_t> index_of( const formula& f ) const;
  std::size_t negation_of( std::size_t i ) const { return negation_[ i ]; }
  bool contains( const formula& f ) const { return index_.count( f ) != 0; }

  const formula& root() const { return elements_[ root_ ]; }
  std::size_t root_index() const { return root_; }
  std::size_t top_index() const { return top_; }
  const std::vector<std::string>& actions() const { return actions_; }

  /// Indices of the positive action atoms, in alphabet order.
  const std::vector<std::size_t>& action_indices() const { return action_indices_; }

private:
  std::size_t add( const formula& f );

  std::vector<formula> elements_;
  std::map<formula, std::size_t> index_;
  std::vector<std::size_t> negation_;
  std::vector<std::string> actions_;
  std::vector<std::size_t> action_indices_;
  std::size_t root_ = 0;
  std::size_t top_ = 0;
};

/// All maximally consistent subsets, sorted by bit vector (bit i stands
/// for closure member i).
std::vector<bitset> maximally_consistent_sets( const closure_set& cl );

/// Direct check of the five consistency conditions.
bool is_maximally_consistent( const closure_set& cl, const bitset& m );

/// `{true, (x >= 21), !on}` style listing of a set's members.
std::string describe( const closure_set& cl, const bitset& m );

} // namespace hyltl
