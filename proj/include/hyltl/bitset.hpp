#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hyltl
{

/// Fixed-width bit vector. Ordering compares bit 0 first with 0 < 1.
class bitset
{
public:
  bitset() = default;
  explicit bitset( std::size_t n ) : size_( n ), words_( ( n + 63 ) / 64, 0 ) {}

  std::size_t size() const { return size_; }
  bool test( std::size_t i ) const { return ( words_[ i / 64 ] >> ( i % 64 ) ) & 1u; }
  void set( std::size_t i, bool v = true )
  {
    const std::uint64_t m = std::uint64_t{ 1 } << ( i % 64 );
    if ( v )
      words_[ i / 64 ] |= m;
    else
      words_[ i / 64 ] &= ~m;
  }
  std::size_t count() const;
  bool none() const { return count() == 0; }

  /// True when every bit selected by `mask` equals the bit in `value`.
  bool matches( const bitset& mask, const bitset& value ) const;

  /// Lowercase hexadecimal, least significant nibble (bits 0..3) first.
  std::string to_hex() const;
  static bitset from_hex( const std::string& hex, std::size_t n );

  friend bool operator==( const bitset&, const bitset& ) = default;
  friend std::strong_ordering operator<=>( const bitset& a, const bitset& b );

private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

} // namespace hyltl
