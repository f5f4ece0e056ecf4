#pragma once

// Oracles shared by the unit and acceptance tests. They are written from
// the definitions, independently of the library's own algorithms.

#include "hyltl/formula.hpp"
#include "hyltl/hybrid.hpp"
#include "hyltl/model_io.hpp"

#include <functional>
#include <map>
#include <queue>
#include <random>
#include <string>
#include <vector>

namespace support
{

using namespace hyltl;

inline std::string source_path( const std::string& rel )
{
  return std::string( HYLTL_SOURCE_DIR ) + "/" + rel;
}

inline hybrid_automaton model( const std::string& name )
{
  return load_model( source_path( "models/" + name ) );
}

/// Every formula over `actions`, true and false with exactly `size` nodes.
inline std::vector<formula> formulas_of_size( std::size_t size, const std::vector<std::string>& actions )
{
  static std::map<std::pair<std::size_t, std::vector<std::string>>, std::vector<formula>> memo;
  auto key = std::make_pair( size, actions );
  if ( auto it = memo.find( key ); it != memo.end() )
    return it->second;
  std::vector<formula> out;
  if ( size == 1 )
  {
    out.push_back( formula::top() );
    out.push_back( formula::bottom() );
    for ( const auto& a : actions )
      out.push_back( formula::action( a ) );
  }
  else
  {
    for ( const auto& c : formulas_of_size( size - 1, actions ) )
    {
      out.push_back( formula::negation( c ) );
      out.push_back( formula::next( c ) );
    }
    for ( std::size_t l = 1; l + 1 < size; ++l )
      for ( const auto& a : formulas_of_size( l, actions ) )
        for ( const auto& b : formulas_of_size( size - 1 - l, actions ) )
        {
          out.push_back( formula::conjunction( a, b ) );
          out.push_back( formula::disjunction( a, b ) );
          out.push_back( formula::until( a, b ) );
          out.push_back( formula::release( a, b ) );
        }
  }
  memo[ key ] = out;
  return out;
}

struct lasso_word
{
  std::vector<std::string> prefix;
  std::vector<std::string> cycle;
};

/// All words over `letters` with |prefix| <= max_prefix and
/// 1 <= |cycle| <= max_cycle.
inline std::vector<lasso_word> lasso_words( const std::vector<std::string>& letters, std::size_t max_prefix,
                                            std::size_t max_cycle )
{
  std::vector<std::vector<std::vector<std::string>>> all( std::max( max_prefix, max_cycle ) + 1 );
  all[ 0 ] = { {} };
  for ( std::size_t n = 1; n < all.size(); ++n )
    for ( const auto& w : all[ n - 1 ] )
      for ( const auto& l : letters )
      {
        auto v = w;
        v.push_back( l );
        all[ n ].push_back( v );
      }
  std::vector<lasso_word> out;
  for ( std::size_t p = 0; p <= max_prefix; ++p )
    for ( std::size_t c = 1; c <= max_cycle; ++c )
      for ( const auto& u : all[ p ] )
        for ( const auto& v : all[ c ] )
          out.push_back( { u, v } );
  return out;
}

/// Truth of an action-only formula at position `i` of `u v^omega`, read
/// straight off the semantic clauses. Letter k (1-based) is the action
/// taken after position k.
class word_semantics
{
public:
  explicit word_semantics( lasso_word w ) : w_( std::move( w ) ) {}

  bool holds( const formula& f, std::size_t i )
  {
    i = canonical( i );
    auto key = std::make_pair( to_string( f ), i );
    if ( auto it = memo_.find( key ); it != memo_.end() )
      return it->second;
    bool r = false;
    const std::size_t horizon = w_.prefix.size() + w_.cycle.size() + 1;
    switch ( f.kind() )
    {
    case formula_kind::top:
      r = true;
      break;
    case formula_kind::bottom:
      r = false;
      break;
    case formula_kind::action_atom:
      r = i > 1 && letter( i - 1 ) == f.action_name();
      break;
    case formula_kind::flow_atom:
      throw std::logic_error( "flow atom in a word formula" );
    case formula_kind::negation:
      r = !holds( f.child(), i );
      break;
    case formula_kind::conjunction:
      r = holds( f.lhs(), i ) && holds( f.rhs(), i );
      break;
    case formula_kind::disjunction:
      r = holds( f.lhs(), i ) || holds( f.rhs(), i );
      break;
    case formula_kind::next:
      r = holds( f.child(), i + 1 );
      break;
    case formula_kind::until:
      // some j >= i with rhs at j and lhs on [i, j)
      for ( std::size_t j = i; j <= i + horizon; ++j )
      {
        if ( holds( f.rhs(), j ) )
        {
          r = true;
          break;
        }
        if ( !holds( f.lhs(), j ) )
          break;
      }
      break;
    case formula_kind::release:
      // rhs holds until and including the first lhs position, or forever
      r = true;
      for ( std::size_t j = i; j <= i + horizon; ++j )
      {
        if ( !holds( f.rhs(), j ) )
        {
          r = false;
          break;
        }
        if ( holds( f.lhs(), j ) )
          break;
      }
      break;
    }
    memo_[ key ] = r;
    return r;
  }

private:
  const std::string& letter( std::size_t k ) const
  {
    const std::size_t idx = k - 1;
    return idx < w_.prefix.size() ? w_.prefix[ idx ] : w_.cycle[ ( idx - w_.prefix.size() ) % w_.cycle.size() ];
  }

  /// Position i and i - |cycle| have the same suffix and the same
  /// preceding letter once i - |cycle| > |prefix| + 1.
  std::size_t canonical( std::size_t i ) const
  {
    const std::size_t p = w_.prefix.size(), c = w_.cycle.size();
    while ( i > p + 1 + c )
      i -= c;
    return i;
  }

  lasso_word w_;
  std::map<std::pair<std::string, std::size_t>, bool> memo_;
};

/// Generalized Buchi acceptance of `u v^omega` by reachability on the
/// product with word positions: some reachable node lies on a cycle whose
/// strongly connected component meets every acceptance set.
inline bool gba_accepts( const hybrid_automaton& h, const lasso_word& w )
{
  const std::size_t n = w.prefix.size() + w.cycle.size();
  const std::size_t nodes = h.locations.size() * n;
  auto letter = [ & ]( std::size_t p ) -> const std::string& {
    return p < w.prefix.size() ? w.prefix[ p ] : w.cycle[ p - w.prefix.size() ];
  };
  std::vector<std::vector<std::size_t>> succ( nodes );
  for ( const auto& e : h.edges )
    for ( std::size_t p = 0; p < n; ++p )
      if ( letter( p ) == e.action )
        succ[ e.source * n + p ].push_back( e.target * n + ( p + 1 < n ? p + 1 : w.prefix.size() ) );

  std::vector<std::vector<bool>> reach( nodes, std::vector<bool>( nodes, false ) );
  for ( std::size_t s = 0; s < nodes; ++s )
  {
    std::queue<std::size_t> q;
    for ( auto t : succ[ s ] )
      if ( !reach[ s ][ t ] )
      {
        reach[ s ][ t ] = true;
        q.push( t );
      }
    while ( !q.empty() )
    {
      const auto u = q.front();
      q.pop();
      for ( auto t : succ[ u ] )
        if ( !reach[ s ][ t ] )
        {
          reach[ s ][ t ] = true;
          q.push( t );
        }
    }
  }
  std::vector<bool> from_init( nodes, false );
  for ( auto l : h.initial )
  {
    from_init[ l * n ] = true;
    for ( std::size_t t = 0; t < nodes; ++t )
      if ( reach[ l * n ][ t ] )
        from_init[ t ] = true;
  }
  for ( std::size_t v = 0; v < nodes; ++v )
  {
    if ( !from_init[ v ] || !reach[ v ][ v ] )
      continue;
    bool all = true;
    for ( const auto& f : h.acceptance )
    {
      bool hit = false;
      for ( auto l : f )
        for ( std::size_t p = 0; p < n && !hit; ++p )
        {
          const std::size_t u = l * n + p;
          hit = u == v || ( reach[ v ][ u ] && reach[ u ][ v ] );
        }
      all = all && hit;
    }
    if ( all )
      return true;
  }
  return false;
}

/// Random automaton over actions {a, b} without continuous data.
inline hybrid_automaton random_gba( std::mt19937_64& rng, std::size_t max_locations, std::size_t max_sets )
{
  std::uniform_int_distribution<std::size_t> nloc( 1, max_locations ), nset( 0, max_sets );
  std::bernoulli_distribution coin( 0.3 ), member( 0.35 );
  hybrid_automaton h;
  h.name = "random";
  h.actions = { "a", "b" };
  const std::size_t n = nloc( rng );
  for ( std::size_t l = 0; l < n; ++l )
    h.locations.push_back( { "l" + std::to_string( l ), {}, {}, {} } );
  for ( std::size_t s = 0; s < n; ++s )
    for ( std::size_t t = 0; t < n; ++t )
      for ( const auto& a : h.actions )
        if ( coin( rng ) )
          h.edges.push_back( { s, t, a, {} } );
  for ( std::size_t l = 0; l < n; ++l )
    if ( l == 0 || coin( rng ) )
      h.initial.push_back( l );
  const std::size_t k = nset( rng );
  for ( std::size_t j = 0; j < k; ++j )
  {
    std::vector<std::size_t> f;
    for ( std::size_t l = 0; l < n; ++l )
      if ( member( rng ) )
        f.push_back( l );
    h.acceptance.push_back( f );
  }
  return h;
}

/// Random formula over flow atoms of `x` and actions {a, b}.
inline formula random_formula( std::mt19937_64& rng, int depth )
{
  std::uniform_int_distribution<int> pick( 0, depth <= 0 ? 3 : 10 );
  const int k = pick( rng );
  auto atom = [ & ]( double c ) {
    return formula::flow( flow_atom{ "", constraint{ expr::variable( "x" ), relation::ge, expr::constant( c ) } } );
  };
  switch ( k )
  {
  case 0:
    return formula::action( "a" );
  case 1:
    return formula::action( "b" );
  case 2:
    return atom( 1.0 );
  case 3:
    return atom( 2.0 );
  case 4:
    return formula::negation( random_formula( rng, depth - 1 ) );
  case 5:
    return formula::next( random_formula( rng, depth - 1 ) );
  case 6:
    return formula::conjunction( random_formula( rng, depth - 1 ), random_formula( rng, depth - 1 ) );
  case 7:
    return formula::disjunction( random_formula( rng, depth - 1 ), random_formula( rng, depth - 1 ) );
  case 8:
    return formula::until( random_formula( rng, depth - 1 ), random_formula( rng, depth - 1 ) );
  case 9:
    return formula::release( random_formula( rng, depth - 1 ), random_formula( rng, depth - 1 ) );
  default:
    return formula::top();
  }
}

} // namespace support
