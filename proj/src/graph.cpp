#include "graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>

namespace hyltl::graph
{

namespace
{
constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
}

std::vector<std::size_t> tarjan_scc( const adjacency& succ )
{
  const std::size_t n = succ.size();
  std::vector<std::size_t> index( n, none ), low( n, 0 ), comp( n, none );
  std::vector<bool> on_stack( n, false );
  std::vector<std::size_t> stack;
  std::size_t counter = 0, comps = 0;

  // iterative to survive deep product graphs
  struct frame
  {
    std::size_t v, next;
  };
  std::vector<frame> call;
  for ( std::size_t root = 0; root < n; ++root )
  {
    if ( index[ root ] != none )
      continue;
    call.push_back( { root, 0 } );
    index[ root ] = low[ root ] = counter++;
    stack.push_back( root );
    on_stack[ root ] = true;
    while ( !call.empty() )
    {
      auto& [ v, next ] = call.back();
      if ( next < succ[ v ].size() )
      {
        const std::size_t w = succ[ v ][ next++ ];
        if ( index[ w ] == none )
        {
          index[ w ] = low[ w ] = counter++;
          stack.push_back( w );
          on_stack[ w ] = true;
          call.push_back( { w, 0 } );
        }
        else if ( on_stack[ w ] )
          low[ v ] = std::min( low[ v ], index[ w ] );
        continue;
      }
      if ( low[ v ] == index[ v ] )
      {
        std::size_t w;
        do
        {
          w = stack.back();
          stack.pop_back();
          on_stack[ w ] = false;
          comp[ w ] = comps;
        } while ( w != v );
        ++comps;
      }
      const std::size_t done = v;
      call.pop_back();
      if ( !call.empty() )
        low[ call.back().v ] = std::min( low[ call.back().v ], low[ done ] );
    }
  }
  return comp;
}

std::vector<bool> reachable_from( const adjacency& succ, const std::vector<std::size_t>& from )
{
  std::vector<bool> seen( succ.size(), false );
  std::deque<std::size_t> queue;
  for ( auto v : from )
    if ( !seen[ v ] )
    {
      seen[ v ] = true;
      queue.push_back( v );
    }
  while ( !queue.empty() )
  {
    const auto v = queue.front();
    queue.pop_front();
    for ( auto w : succ[ v ] )
      if ( !seen[ w ] )
      {
        seen[ w ] = true;
        queue.push_back( w );
      }
  }
  return seen;
}

std::vector<bool> reaching( const adjacency& succ, const std::vector<bool>& to )
{
  adjacency pred( succ.size() );
  for ( std::size_t v = 0; v < succ.size(); ++v )
    for ( auto w : succ[ v ] )
      pred[ w ].push_back( v );
  std::vector<std::size_t> targets;
  for ( std::size_t v = 0; v < to.size(); ++v )
    if ( to[ v ] )
      targets.push_back( v );
  return reachable_from( pred, targets );
}

namespace
{

/// Accepting components: nontrivial, reachable and meeting every set.
std::vector<bool> accepting_components( const adjacency& succ, const std::vector<std::size_t>& comp,
                                        const std::vector<bool>& reach,
                                        const std::vector<std::vector<bool>>& accept )
{
  std::size_t k = 0;
  for ( auto c : comp )
    if ( c != none )
      k = std::max( k, c + 1 );
  std::vector<bool> nontrivial( k, false );
  std::vector<std::vector<bool>> meets( accept.size(), std::vector<bool>( k, false ) );
  for ( std::size_t v = 0; v < succ.size(); ++v )
  {
    if ( !reach[ v ] )
      continue;
    for ( auto w : succ[ v ] )
      if ( comp[ w ] == comp[ v ] )
        nontrivial[ comp[ v ] ] = true;
    for ( std::size_t j = 0; j < accept.size(); ++j )
      if ( accept[ j ][ v ] )
        meets[ j ][ comp[ v ] ] = true;
  }
  std::vector<bool> ok( k, false );
  for ( std::size_t c = 0; c < k; ++c )
  {
    ok[ c ] = nontrivial[ c ];
    for ( std::size_t j = 0; j < accept.size() && ok[ c ]; ++j )
      ok[ c ] = meets[ j ][ c ];
  }
  return ok;
}

/// Shortest path from `from` to a node satisfying `goal` using only
/// nodes allowed by `inside`; at least one edge when `need_step`.
/// Returns the nodes after `from`, ending at the goal node.
std::optional<std::vector<std::size_t>> bfs_path( const adjacency& succ, std::size_t from,
                                                  const std::function<bool( std::size_t )>& goal,
                                                  const std::function<bool( std::size_t )>& inside, bool need_step )
{
  if ( !need_step && goal( from ) )
    return std::vector<std::size_t>{};
  std::vector<std::size_t> parent( succ.size(), none );
  std::vector<bool> seen( succ.size(), false );
  std::deque<std::size_t> queue{ from };
  while ( !queue.empty() )
  {
    const auto v = queue.front();
    queue.pop_front();
    for ( auto w : succ[ v ] )
    {
      if ( !inside( w ) || seen[ w ] )
        continue;
      seen[ w ] = true;
      parent[ w ] = v;
      if ( goal( w ) )
      {
        std::vector<std::size_t> path{ w };
        for ( auto u = v; u != from; u = parent[ u ] )
          path.push_back( u );
        std::reverse( path.begin(), path.end() );
        return path;
      }
      queue.push_back( w );
    }
  }
  return std::nullopt;
}

} // namespace

std::optional<lasso_path> find_accepting_lasso( const adjacency& succ, const std::vector<std::size_t>& initial,
                                                const std::vector<std::vector<bool>>& accept )
{
  const auto reach = reachable_from( succ, initial );
  const auto comp = tarjan_scc( succ );
  const auto ok = accepting_components( succ, comp, reach, accept );

  // the first accepting node in breadth-first order from the initial set
  std::vector<std::size_t> order;
  {
    std::vector<bool> seen( succ.size(), false );
    std::deque<std::size_t> queue;
    for ( auto v : initial )
      if ( !seen[ v ] )
      {
        seen[ v ] = true;
        queue.push_back( v );
      }
    while ( !queue.empty() )
    {
      const auto v = queue.front();
      queue.pop_front();
      order.push_back( v );
      for ( auto w : succ[ v ] )
        if ( !seen[ w ] )
        {
          seen[ w ] = true;
          queue.push_back( w );
        }
    }
  }
  std::optional<std::size_t> anchor;
  for ( auto v : order )
    if ( ok[ comp[ v ] ] )
    {
      anchor = v;
      break;
    }
  if ( !anchor )
    return std::nullopt;

  lasso_path out;
  // prefix: initial node up to (excluding) the anchor
  {
    std::optional<std::vector<std::size_t>> best;
    std::size_t best_start = none;
    for ( auto s : initial )
    {
      auto p = bfs_path(
          succ, s, [ & ]( std::size_t v ) { return v == *anchor; }, []( std::size_t ) { return true; }, false );
      if ( p && ( !best || p->size() < best->size() ) )
      {
        best = p;
        best_start = s;
      }
    }
    if ( best_start != *anchor )
    {
      out.prefix.push_back( best_start );
      out.prefix.insert( out.prefix.end(), best->begin(), best->end() - 1 );
    }
  }
  const std::size_t c = comp[ *anchor ];
  auto inside = [ & ]( std::size_t v ) { return comp[ v ] == c; };
  std::size_t cur = *anchor;
  out.cycle.push_back( cur );
  for ( const auto& set : accept )
  {
    auto p = bfs_path(
        succ, cur, [ & ]( std::size_t v ) { return set[ v ]; }, inside, false );
    for ( auto v : *p )
      out.cycle.push_back( v );
    cur = out.cycle.back();
  }
  auto back = bfs_path(
      succ, cur, [ & ]( std::size_t v ) { return v == *anchor; }, inside, true );
  for ( auto v : *back )
    out.cycle.push_back( v );
  out.cycle.pop_back(); // the anchor closes the loop
  return out;
}

std::vector<bool> live_nodes( const adjacency& succ, const std::vector<std::size_t>& initial,
                              const std::vector<std::vector<bool>>& accept )
{
  const auto reach = reachable_from( succ, initial );
  const auto comp = tarjan_scc( succ );
  const auto ok = accepting_components( succ, comp, reach, accept );
  std::vector<bool> good( succ.size(), false );
  for ( std::size_t v = 0; v < succ.size(); ++v )
    good[ v ] = reach[ v ] && ok[ comp[ v ] ];
  auto live = reaching( succ, good );
  for ( std::size_t v = 0; v < succ.size(); ++v )
    live[ v ] = live[ v ] && reach[ v ];
  return live;
}

} // namespace hyltl::graph
