#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hyltl
{

/// Closed interval over the extended reals. All arithmetic rounds outward,
/// so results enclose the exact real image of the operands.
struct interval
{
  double lo = 0.0;
  double hi = 0.0;

  static interval point( double v ) { return { v, v }; }
  static interval entire();

  bool is_empty() const { return !( lo <= hi ); }
  bool is_point() const { return lo == hi; }
  bool contains( double v ) const { return lo <= v && v <= hi; }
  bool subset_of( const interval& other ) const { return other.lo <= lo && hi <= other.hi; }
  bool bounded() const;
  double width() const { return hi - lo; }

  friend bool operator==( const interval&, const interval& ) = default;
};

double round_down( double v );
double round_up( double v );

interval operator+( const interval& a, const interval& b );
interval operator-( const interval& a, const interval& b );
interval operator-( const interval& a );
interval operator*( const interval& a, const interval& b );
interval operator/( const interval& a, const interval& b );
interval scale( double k, const interval& a );

interval sin( const interval& a );
interval cos( const interval& a );
interval exp( const interval& a );

interval hull( const interval& a, const interval& b );
/// Empty result is signalled by an interval with lo > hi.
interval intersect( const interval& a, const interval& b );
bool overlaps( const interval& a, const interval& b );

std::string to_string( const interval& a );

/// Axis-aligned box, one interval per variable (indexed by the owning
/// automaton's variable order).
class box
{
public:
  box() = default;
  explicit box( std::size_t dims );
  explicit box( std::vector<interval> dims ) : dims_( std::move( dims ) ) {}

  static box entire( std::size_t dims );

  std::size_t size() const { return dims_.size(); }
  interval& operator[]( std::size_t i ) { return dims_[ i ]; }
  const interval& operator[]( std::size_t i ) const { return dims_[ i ]; }
  const std::vector<interval>& dims() const { return dims_; }

  bool is_empty() const;
  bool subset_of( const box& other ) const;
  bool overlaps( const box& other ) const;
  double volume() const;

  friend bool operator==( const box&, const box& ) = default;

private:
  std::vector<interval> dims_;
};

box hull( const box& a, const box& b );
std::optional<box> intersect( const box& a, const box& b );

} // namespace hyltl
