#pragma once

#include "hyltl/expr.hpp"

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hyltl
{

enum class formula_kind : unsigned char
{
  top,
  bottom,
  flow_atom,
  action_atom,
  negation,
  conjunction,
  disjunction,
  next,
  until,
  release
};

/// A flow-constraint atom. `name` is set when the atom refers to a named
/// constraint of the declarations; otherwise the atom was written inline.
struct flow_atom
{
  std::string name;
  constraint condition;

  /// Identity used for equality and ordering of atoms.
  std::string key() const;
};

/// Immutable HyLTL formula with structural equality and a total order.
class formula
{
public:
  static formula top();
  static formula bottom();
  static formula flow( flow_atom atom );
  static formula action( std::string name );
  static formula negation( formula f );
  static formula conjunction( formula l, formula r );
  static formula disjunction( formula l, formula r );
  static formula next( formula f );
  static formula until( formula l, formula r );
  static formula release( formula l, formula r );

  /// `true U f`
  static formula eventually( formula f );
  /// `!(true U !f)`
  static formula globally( formula f );
  /// `!l | r`
  static formula implies( formula l, formula r );

  formula_kind kind() const;
  bool is( formula_kind k ) const { return kind() == k; }
  const flow_atom& atom() const;
  const std::string& action_name() const;
  const formula& child() const { return lhs(); }
  const formula& lhs() const;
  const formula& rhs() const;

  /// Number of AST nodes.
  std::size_t size() const;

  friend bool operator==( const formula& a, const formula& b );
  friend std::strong_ordering operator<=>( const formula& a, const formula& b );

private:
  struct node;
  explicit formula( std::shared_ptr<const node> n ) : node_( std::move( n ) ) {}
  std::shared_ptr<const node> node_;
};

/// Fully parenthesised concrete syntax; `parse_formula` reads it back to an
/// equal formula.
std::string to_string( const formula& f );

struct named_constraint
{
  std::string name;
  constraint condition;
  std::optional<constraint> complement;
};

/// Symbols a formula may refer to.
struct declarations
{
  std::vector<std::string> variables;
  std::vector<std::string> actions;
  std::vector<named_constraint> constraints;

  bool is_variable( const std::string& name ) const;
  bool is_action( const std::string& name ) const;
  const named_constraint* find_constraint( const std::string& name ) const;
};

/// Parse the concrete syntax. F and G are expanded on the fly.
/// Throws `parse_error` with the source position on failure.
formula parse_formula( const std::string& text, const declarations& decl );

/// Complement constraint of a flow atom: the declared complement for named
/// constraints, the flipped inequality for inline ones. nullopt when none.
std::optional<constraint> complement_of( const flow_atom& atom, const declarations& decl );

struct nnf_options
{
  /// Reject negated flow atoms without a complement instead of keeping
  /// them as literals.
  bool strict = false;
};

/// Push negations down to the atoms. Negated flow atoms are replaced by
/// their complement; the semantic strengthening this implies is reported
/// through `warnings`.
formula to_nnf( const formula& f, const declarations& decl, const nnf_options& options = {},
                std::vector<std::string>* warnings = nullptr );

bool is_nnf( const formula& f );

/// Every action name and flow atom occurring in `f`.
std::vector<std::string> actions_of( const formula& f );
std::vector<flow_atom> flow_atoms_of( const formula& f );

} // namespace hyltl
