#include "hyltl/closure.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace hyltl
{

formula negate( const formula& f )
{
  switch ( f.kind() )
  {
  case formula_kind::negation:
    return f.child();
  case formula_kind::top:
    return formula::bottom();
  case formula_kind::bottom:
    return formula::top();
  default:
    return formula::negation( f );
  }
}

formula normalize( const formula& f )
{
  switch ( f.kind() )
  {
  case formula_kind::negation:
    return negate( normalize( f.child() ) );
  case formula_kind::next:
    return formula::next( normalize( f.child() ) );
  case formula_kind::conjunction:
    return formula::conjunction( normalize( f.lhs() ), normalize( f.rhs() ) );
  case formula_kind::disjunction:
    return formula::disjunction( normalize( f.lhs() ), normalize( f.rhs() ) );
  case formula_kind::until:
    return formula::until( normalize( f.lhs() ), normalize( f.rhs() ) );
  case formula_kind::release:
    return formula::release( normalize( f.lhs() ), normalize( f.rhs() ) );
  default:
    return f;
  }
}

closure_set::closure_set( const formula& phi, std::vector<std::string> actions ) : actions_( std::move( actions ) )
{
  std::sort( actions_.begin(), actions_.end() );
  actions_.erase( std::unique( actions_.begin(), actions_.end() ), actions_.end() );

  root_ = add( normalize( phi ) );
  for ( const auto& a : actions_ )
    action_indices_.push_back( add( formula::action( a ) ) );
  top_ = add( formula::top() );

  // members are processed in insertion order; the sub-formula rules only
  // ever append, so one pass suffices
  for ( std::size_t i = 0; i < elements_.size(); ++i )
  {
    const formula f = elements_[ i ];
    switch ( f.kind() )
    {
    case formula_kind::next:
      add( f.child() );
      break;
    case formula_kind::conjunction:
    case formula_kind::disjunction:
    case formula_kind::until:
    case formula_kind::release:
      add( f.lhs() );
      add( f.rhs() );
      break;
    default:
      break;
    }
  }
}

std::size_t closure_set::add( const formula& f )
{
  if ( auto it = index_.find( f ); it != index_.end() )
    return it->second;
  const std::size_t i = elements_.size();
  const formula n = negate( f );
  elements_.push_back( f );
  elements_.push_back( n );
  index_.emplace( f, i );
  index_.emplace( n, i + 1 );
  negation_.push_back( i + 1 );
  negation_.push_back( i );
  return i;
}

std::optional<std::size_t> closure_set::index_of( const formula& f ) const
{
  if ( auto it = index_.find( f ); it != index_.end() )
    return it->second;
  return std::nullopt;
}

namespace
{

bool is_free( const formula& f )
{
  switch ( f.kind() )
  {
  case formula_kind::flow_atom:
  case formula_kind::action_atom:
  case formula_kind::next:
  case formula_kind::until:
  case formula_kind::release:
    return true;
  default:
    return false;
  }
}

bool is_positive( const formula& f )
{
  return !f.is( formula_kind::negation ) && !f.is( formula_kind::bottom );
}

} // namespace

std::vector<bitset> maximally_consistent_sets( const closure_set& cl )
{
  // one free choice per (psi, !psi) pair whose positive member is an atom
  // or a temporal formula; boolean members follow from the choice
  std::vector<std::size_t> free;
  for ( std::size_t i = 0; i < cl.size(); ++i )
    if ( is_positive( cl.at( i ) ) && is_free( cl.at( i ) ) )
      free.push_back( i );

  std::vector<int> value( cl.size(), -1 );
  std::vector<bitset> out;

  std::function<bool( const formula& )> eval = [ & ]( const formula& f ) -> bool {
    const std::size_t i = *cl.index_of( f );
    if ( value[ i ] >= 0 )
      return value[ i ] != 0;
    bool v = false;
    switch ( f.kind() )
    {
    case formula_kind::top:
      v = true;
      break;
    case formula_kind::bottom:
      v = false;
      break;
    case formula_kind::negation:
      v = !eval( f.child() );
      break;
    case formula_kind::conjunction:
      v = eval( f.lhs() ) && eval( f.rhs() );
      break;
    case formula_kind::disjunction:
      v = eval( f.lhs() ) || eval( f.rhs() );
      break;
    default:
      break;
    }
    value[ i ] = v ? 1 : 0;
    return v;
  };

  std::vector<int> choice( free.size(), 0 );
  std::function<void( std::size_t, bool )> rec = [ & ]( std::size_t k, bool action_taken ) {
    if ( k == free.size() )
    {
      std::fill( value.begin(), value.end(), -1 );
      for ( std::size_t j = 0; j < free.size(); ++j )
      {
        value[ free[ j ] ] = choice[ j ];
        value[ cl.negation_of( free[ j ] ) ] = 1 - choice[ j ];
      }
      bitset m( cl.size() );
      for ( std::size_t i = 0; i < cl.size(); ++i )
        m.set( i, eval( cl.at( i ) ) );
      out.push_back( std::move( m ) );
      return;
    }
    const bool is_action = cl.at( free[ k ] ).is( formula_kind::action_atom );
    choice[ k ] = 0;
    rec( k + 1, action_taken );
    if ( is_action && action_taken )
      return;
    choice[ k ] = 1;
    rec( k + 1, action_taken || is_action );
  };
  rec( 0, false );

  std::sort( out.begin(), out.end() );
  return out;
}

bool is_maximally_consistent( const closure_set& cl, const bitset& m )
{
  if ( m.size() != cl.size() || !m.test( cl.top_index() ) )
    return false;
  std::size_t actions = 0;
  for ( std::size_t i = 0; i < cl.size(); ++i )
  {
    const formula& f = cl.at( i );
    if ( m.test( i ) == m.test( cl.negation_of( i ) ) )
      return false;
    if ( f.is( formula_kind::conjunction ) &&
         m.test( i ) != ( m.test( *cl.index_of( f.lhs() ) ) && m.test( *cl.index_of( f.rhs() ) ) ) )
      return false;
    if ( f.is( formula_kind::disjunction ) &&
         m.test( i ) != ( m.test( *cl.index_of( f.lhs() ) ) || m.test( *cl.index_of( f.rhs() ) ) ) )
      return false;
    if ( f.is( formula_kind::action_atom ) && m.test( i ) )
      ++actions;
  }
  return actions <= 1;
}

std::string describe( const closure_set& cl, const bitset& m )
{
  std::string out = "{";
  bool first = true;
  for ( std::size_t i = 0; i < cl.size(); ++i )
    if ( m.test( i ) )
    {
      if ( !first )
        out += ", ";
      first = false;
      out += to_string( cl.at( i ) );
    }
  return out + "}";
}

} // namespace hyltl
