#include "hyltl/bitset.hpp"

#include "hyltl/error.hpp"

#include <bit>

namespace hyltl
{

std::size_t bitset::count() const
{
  std::size_t c = 0;
  for ( auto w : words_ )
    c += static_cast<std::size_t>( std::popcount( w ) );
  return c;
}

bool bitset::matches( const bitset& mask, const bitset& value ) const
{
  for ( std::size_t i = 0; i < words_.size(); ++i )
    if ( ( words_[ i ] ^ value.words_[ i ] ) & mask.words_[ i ] )
      return false;
  return true;
}

std::string bitset::to_hex() const
{
  static const char digits[] = "0123456789abcdef";
  std::string out;
  for ( std::size_t i = 0; i < size_; i += 4 )
  {
    unsigned nib = 0;
    for ( std::size_t k = 0; k < 4 && i + k < size_; ++k )
      nib |= static_cast<unsigned>( test( i + k ) ) << k;
    out.push_back( digits[ nib ] );
  }
  return out;
}

bitset bitset::from_hex( const std::string& hex, std::size_t n )
{
  bitset b( n );
  for ( std::size_t j = 0; j < hex.size(); ++j )
  {
    const char c = hex[ j ];
    unsigned nib;
    if ( c >= '0' && c <= '9' )
      nib = static_cast<unsigned>( c - '0' );
    else if ( c >= 'a' && c <= 'f' )
      nib = static_cast<unsigned>( c - 'a' + 10 );
    else
      throw error( "invalid_argument", "bad hex digit in bit vector" );
    for ( std::size_t k = 0; k < 4; ++k )
      if ( ( nib >> k ) & 1u )
      {
        if ( j * 4 + k >= n )
          throw error( "invalid_argument", "bit vector wider than expected" );
        b.set( j * 4 + k );
      }
  }
  return b;
}

std::strong_ordering operator<=>( const bitset& a, const bitset& b )
{
  const std::size_t n = std::min( a.size_, b.size_ );
  for ( std::size_t i = 0; i < n; ++i )
    if ( a.test( i ) != b.test( i ) )
      return a.test( i ) ? std::strong_ordering::greater : std::strong_ordering::less;
  return a.size_ <=> b.size_;
}

} // namespace hyltl
