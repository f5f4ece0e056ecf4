#pragma once

// Small directed-graph helpers over dense node indices.

#include <cstddef>
#include <optional>
#include <vector>

namespace hyltl::graph
{

using adjacency = std::vector<std::vector<std::size_t>>;

/// Component id per node, numbered in reverse topological order.
std::vector<std::size_t> tarjan_scc( const adjacency& succ );

/// Nodes reachable from `from`, as a membership mask.
std::vector<bool> reachable_from( const adjacency& succ, const std::vector<std::size_t>& from );

/// Nodes that can reach a node in `to`.
std::vector<bool> reaching( const adjacency& succ, const std::vector<bool>& to );

struct lasso_path
{
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> cycle;
};

/// A run from `initial` that loops through a node of every set in
/// `accept` (given as node masks). With no sets any cycle qualifies.
std::optional<lasso_path> find_accepting_lasso( const adjacency& succ, const std::vector<std::size_t>& initial,
                                                const std::vector<std::vector<bool>>& accept );

/// Nodes lying on some reachable cycle that meets every acceptance set,
/// plus everything that can reach such a cycle.
std::vector<bool> live_nodes( const adjacency& succ, const std::vector<std::size_t>& initial,
                              const std::vector<std::vector<bool>>& accept );

} // namespace hyltl::graph
