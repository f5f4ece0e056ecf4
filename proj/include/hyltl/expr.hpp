#pragma once

#include "hyltl/interval.hpp"

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

namespace hyltl
{

/// A variable occurrence: `x`, its derivative `der(x)` or its post-jump
/// value `x'`.
enum class var_kind : unsigned char
{
  plain,
  dotted,
  primed
};

struct var_ref
{
  std::string name;
  var_kind kind = var_kind::plain;

  auto operator<=>( const var_ref& ) const = default;
};

std::string to_string( const var_ref& v );

enum class expr_op : unsigned char
{
  constant,
  variable,
  add,
  sub,
  mul,
  div,
  neg,
  sin,
  cos,
  exp
};

/// Immutable arithmetic expression tree over reals and variable references.
class expr
{
public:
  static expr constant( double v );
  static expr variable( var_ref v );
  static expr variable( std::string name, var_kind kind = var_kind::plain );
  static expr binary( expr_op op, expr lhs, expr rhs );
  static expr unary( expr_op op, expr arg );

  expr_op op() const;
  double value() const;
  const var_ref& var() const;
  const expr& lhs() const;
  const expr& rhs() const;
  const expr& arg() const { return lhs(); }

  /// Replace variables through `map`; unmapped occurrences are kept.
  expr substitute( const std::function<std::optional<expr>( const var_ref& )>& map ) const;

  friend bool operator==( const expr& a, const expr& b );

private:
  struct node;
  explicit expr( std::shared_ptr<const node> n ) : node_( std::move( n ) ) {}
  std::shared_ptr<const node> node_;
};

expr operator+( const expr& a, const expr& b );
expr operator-( const expr& a, const expr& b );
expr operator*( const expr& a, const expr& b );

std::string to_string( const expr& e );

using value_lookup = std::function<double( const var_ref& )>;
using interval_lookup = std::function<interval( const var_ref& )>;

double evaluate( const expr& e, const value_lookup& lookup );
interval evaluate( const expr& e, const interval_lookup& lookup );

void collect_variables( const expr& e, std::set<var_ref>& out );

/// sum(coeffs[v] * v) + constant
struct linear_form
{
  std::map<var_ref, double> coeffs;
  double constant = 0.0;

  bool is_constant() const { return coeffs.empty(); }
  double coeff( const var_ref& v ) const;
};

/// nullopt when `e` is not affine in its variables.
std::optional<linear_form> linearize( const expr& e );

enum class relation : unsigned char
{
  lt,
  le,
  eq,
  ge,
  gt
};

std::string to_string( relation r );
/// Relation obtained by swapping the two sides (`<` becomes `>`).
relation mirror( relation r );
/// Logical complement of an inequality; nullopt for `=`.
std::optional<relation> complement( relation r );

/// Comparison within absolute tolerance `tol` for equalities and
/// non-strict inequalities; strict inequalities are exact.
bool holds( double lhs, relation r, double rhs, double tol );

/// `lhs rel rhs`. Flow constraints use plain and dotted variables, jump
/// constraints plain and primed ones.
struct constraint
{
  expr lhs;
  relation rel = relation::eq;
  expr rhs;

  friend bool operator==( const constraint&, const constraint& ) = default;
};

std::string to_string( const constraint& c );
std::set<var_ref> variables( const constraint& c );
bool mentions( const constraint& c, var_kind kind );
/// `lhs - rhs` as a linear form, when affine.
std::optional<linear_form> linearize( const constraint& c );
bool holds( const constraint& c, const value_lookup& lookup, double tol );
/// False only when the box certainly violates `c`.
bool may_hold( const constraint& c, const interval_lookup& lookup );

} // namespace hyltl
