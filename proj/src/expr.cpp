#include "hyltl/expr.hpp"

#include "hyltl/error.hpp"

#include <charconv>
#include <cmath>

namespace hyltl
{

struct expr::node
{
  expr_op op;
  double value = 0.0;
  var_ref var;
  std::optional<expr> lhs;
  std::optional<expr> rhs;
};

std::string to_string( const var_ref& v )
{
  switch ( v.kind )
  {
  case var_kind::plain:
    return v.name;
  case var_kind::dotted:
    return "der(" + v.name + ")";
  case var_kind::primed:
    return v.name + "'";
  }
  return v.name;
}

expr expr::constant( double v )
{
  return expr( std::make_shared<const node>( node{ expr_op::constant, v, {}, {}, {} } ) );
}

expr expr::variable( var_ref v )
{
  return expr( std::make_shared<const node>( node{ expr_op::variable, 0.0, std::move( v ), {}, {} } ) );
}

expr expr::variable( std::string name, var_kind kind )
{
  return variable( var_ref{ std::move( name ), kind } );
}

expr expr::binary( expr_op op, expr lhs, expr rhs )
{
  return expr( std::make_shared<const node>( node{ op, 0.0, {}, std::move( lhs ), std::move( rhs ) } ) );
}

expr expr::unary( expr_op op, expr arg )
{
  return expr( std::make_shared<const node>( node{ op, 0.0, {}, std::move( arg ), {} } ) );
}

expr_op expr::op() const
{
  return node_->op;
}

double expr::value() const
{
  return node_->value;
}

const var_ref& expr::var() const
{
  return node_->var;
}

const expr& expr::lhs() const
{
  return *node_->lhs;
}

const expr& expr::rhs() const
{
  return *node_->rhs;
}

expr expr::substitute( const std::function<std::optional<expr>( const var_ref& )>& map ) const
{
  switch ( op() )
  {
  case expr_op::constant:
    return *this;
  case expr_op::variable:
    if ( auto r = map( var() ) )
      return *r;
    return *this;
  case expr_op::neg:
  case expr_op::sin:
  case expr_op::cos:
  case expr_op::exp:
    return unary( op(), arg().substitute( map ) );
  default:
    return binary( op(), lhs().substitute( map ), rhs().substitute( map ) );
  }
}

bool operator==( const expr& a, const expr& b )
{
  if ( a.node_ == b.node_ )
    return true;
  if ( a.op() != b.op() )
    return false;
  switch ( a.op() )
  {
  case expr_op::constant:
    return a.value() == b.value();
  case expr_op::variable:
    return a.var() == b.var();
  case expr_op::neg:
  case expr_op::sin:
  case expr_op::cos:
  case expr_op::exp:
    return a.arg() == b.arg();
  default:
    return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

expr operator+( const expr& a, const expr& b )
{
  return expr::binary( expr_op::add, a, b );
}

expr operator-( const expr& a, const expr& b )
{
  return expr::binary( expr_op::sub, a, b );
}

expr operator*( const expr& a, const expr& b )
{
  return expr::binary( expr_op::mul, a, b );
}

namespace
{

std::string format_number( double v )
{
  char buf[ 64 ];
  auto res = std::to_chars( buf, buf + sizeof( buf ), v );
  return std::string( buf, res.ptr );
}

int precedence( const expr& e )
{
  switch ( e.op() )
  {
  case expr_op::add:
  case expr_op::sub:
    return 1;
  case expr_op::mul:
  case expr_op::div:
    return 2;
  case expr_op::neg:
    return 3;
  case expr_op::constant:
    // a negative literal prints with a leading minus
    return e.value() < 0 || std::signbit( e.value() ) ? 3 : 4;
  default:
    return 4;
  }
}

void print( const expr& e, int min_prec, std::string& out )
{
  const int prec = precedence( e );
  const bool parens = prec < min_prec;
  if ( parens )
    out += '(';
  switch ( e.op() )
  {
  case expr_op::constant:
    out += format_number( e.value() );
    break;
  case expr_op::variable:
    out += to_string( e.var() );
    break;
  case expr_op::add:
  case expr_op::sub:
    print( e.lhs(), 1, out );
    out += e.op() == expr_op::add ? " + " : " - ";
    print( e.rhs(), 2, out );
    break;
  case expr_op::mul:
  case expr_op::div:
    print( e.lhs(), 2, out );
    out += e.op() == expr_op::mul ? " * " : " / ";
    print( e.rhs(), 3, out );
    break;
  case expr_op::neg:
    // always parenthesised so that `-(3)` is not re-read as a literal
    out += "-(";
    print( e.arg(), 0, out );
    out += ')';
    break;
  case expr_op::sin:
  case expr_op::cos:
  case expr_op::exp:
    out += e.op() == expr_op::sin ? "sin(" : e.op() == expr_op::cos ? "cos(" : "exp(";
    print( e.arg(), 0, out );
    out += ')';
    break;
  }
  if ( parens )
    out += ')';
}

} // namespace

std::string to_string( const expr& e )
{
  std::string out;
  print( e, 0, out );
  return out;
}

double evaluate( const expr& e, const value_lookup& lookup )
{
  switch ( e.op() )
  {
  case expr_op::constant:
    return e.value();
  case expr_op::variable:
    return lookup( e.var() );
  case expr_op::add:
    return evaluate( e.lhs(), lookup ) + evaluate( e.rhs(), lookup );
  case expr_op::sub:
    return evaluate( e.lhs(), lookup ) - evaluate( e.rhs(), lookup );
  case expr_op::mul:
    return evaluate( e.lhs(), lookup ) * evaluate( e.rhs(), lookup );
  case expr_op::div:
    return evaluate( e.lhs(), lookup ) / evaluate( e.rhs(), lookup );
  case expr_op::neg:
    return -evaluate( e.arg(), lookup );
  case expr_op::sin:
    return std::sin( evaluate( e.arg(), lookup ) );
  case expr_op::cos:
    return std::cos( evaluate( e.arg(), lookup ) );
  case expr_op::exp:
    return std::exp( evaluate( e.arg(), lookup ) );
  }
  return 0.0;
}

interval evaluate( const expr& e, const interval_lookup& lookup )
{
  switch ( e.op() )
  {
  case expr_op::constant:
    return interval::point( e.value() );
  case expr_op::variable:
    return lookup( e.var() );
  case expr_op::add:
    return evaluate( e.lhs(), lookup ) + evaluate( e.rhs(), lookup );
  case expr_op::sub:
    return evaluate( e.lhs(), lookup ) - evaluate( e.rhs(), lookup );
  case expr_op::mul:
    return evaluate( e.lhs(), lookup ) * evaluate( e.rhs(), lookup );
  case expr_op::div:
    return evaluate( e.lhs(), lookup ) / evaluate( e.rhs(), lookup );
  case expr_op::neg:
    return -evaluate( e.arg(), lookup );
  case expr_op::sin:
    return sin( evaluate( e.arg(), lookup ) );
  case expr_op::cos:
    return cos( evaluate( e.arg(), lookup ) );
  case expr_op::exp:
    return exp( evaluate( e.arg(), lookup ) );
  }
  return interval::entire();
}

void collect_variables( const expr& e, std::set<var_ref>& out )
{
  switch ( e.op() )
  {
  case expr_op::constant:
    return;
  case expr_op::variable:
    out.insert( e.var() );
    return;
  case expr_op::neg:
  case expr_op::sin:
  case expr_op::cos:
  case expr_op::exp:
    collect_variables( e.arg(), out );
    return;
  default:
    collect_variables( e.lhs(), out );
    collect_variables( e.rhs(), out );
  }
}

double linear_form::coeff( const var_ref& v ) const
{
  auto it = coeffs.find( v );
  return it == coeffs.end() ? 0.0 : it->second;
}

namespace
{

linear_form scaled( linear_form f, double k )
{
  for ( auto& [ v, c ] : f.coeffs )
    c *= k;
  f.constant *= k;
  std::erase_if( f.coeffs, []( const auto& kv ) { return kv.second == 0.0; } );
  return f;
}

linear_form combined( linear_form a, const linear_form& b, double sign )
{
  for ( const auto& [ v, c ] : b.coeffs )
    a.coeffs[ v ] += sign * c;
  a.constant += sign * b.constant;
  std::erase_if( a.coeffs, []( const auto& kv ) { return kv.second == 0.0; } );
  return a;
}

} // namespace

std::optional<linear_form> linearize( const expr& e )
{
  switch ( e.op() )
  {
  case expr_op::constant:
    return linear_form{ {}, e.value() };
  case expr_op::variable:
    return linear_form{ { { e.var(), 1.0 } }, 0.0 };
  case expr_op::add:
  case expr_op::sub:
  {
    auto l = linearize( e.lhs() );
    auto r = linearize( e.rhs() );
    if ( !l || !r )
      return std::nullopt;
    return combined( *l, *r, e.op() == expr_op::add ? 1.0 : -1.0 );
  }
  case expr_op::mul:
  {
    auto l = linearize( e.lhs() );
    auto r = linearize( e.rhs() );
    if ( !l || !r )
      return std::nullopt;
    if ( l->is_constant() )
      return scaled( *r, l->constant );
    if ( r->is_constant() )
      return scaled( *l, r->constant );
    return std::nullopt;
  }
  case expr_op::div:
  {
    auto l = linearize( e.lhs() );
    auto r = linearize( e.rhs() );
    if ( !l || !r || !r->is_constant() || r->constant == 0.0 )
      return std::nullopt;
    return scaled( *l, 1.0 / r->constant );
  }
  case expr_op::neg:
  {
    auto a = linearize( e.arg() );
    if ( !a )
      return std::nullopt;
    return scaled( *a, -1.0 );
  }
  case expr_op::sin:
  case expr_op::cos:
  case expr_op::exp:
  {
    auto a = linearize( e.arg() );
    if ( !a || !a->is_constant() )
      return std::nullopt;
    const double v = a->constant;
    return linear_form{ {}, e.op() == expr_op::sin ? std::sin( v ) : e.op() == expr_op::cos ? std::cos( v ) : std::exp( v ) };
  }
  }
  return std::nullopt;
}

std::string to_string( relation r )
{
  switch ( r )
  {
  case relation::lt:
    return "<";
  case relation::le:
    return "<=";
  case relation::eq:
    return "=";
  case relation::ge:
    return ">=";
  case relation::gt:
    return ">";
  }
  return "?";
}

relation mirror( relation r )
{
  switch ( r )
  {
  case relation::lt:
    return relation::gt;
  case relation::le:
    return relation::ge;
  case relation::ge:
    return relation::le;
  case relation::gt:
    return relation::lt;
  default:
    return r;
  }
}

std::optional<relation> complement( relation r )
{
  switch ( r )
  {
  case relation::lt:
    return relation::ge;
  case relation::le:
    return relation::gt;
  case relation::ge:
    return relation::lt;
  case relation::gt:
    return relation::le;
  default:
    return std::nullopt;
  }
}

bool holds( double lhs, relation r, double rhs, double tol )
{
  switch ( r )
  {
  case relation::lt:
    return lhs < rhs;
  case relation::le:
    return lhs <= rhs + tol;
  case relation::eq:
    return std::abs( lhs - rhs ) <= tol;
  case relation::ge:
    return lhs + tol >= rhs;
  case relation::gt:
    return lhs > rhs;
  }
  return false;
}

std::string to_string( const constraint& c )
{
  return to_string( c.lhs ) + " " + to_string( c.rel ) + " " + to_string( c.rhs );
}

std::set<var_ref> variables( const constraint& c )
{
  std::set<var_ref> out;
  collect_variables( c.lhs, out );
  collect_variables( c.rhs, out );
  return out;
}

bool mentions( const constraint& c, var_kind kind )
{
  for ( const auto& v : variables( c ) )
    if ( v.kind == kind )
      return true;
  return false;
}

std::optional<linear_form> linearize( const constraint& c )
{
  auto l = linearize( c.lhs );
  auto r = linearize( c.rhs );
  if ( !l || !r )
    return std::nullopt;
  return combined( *l, *r, -1.0 );
}

bool holds( const constraint& c, const value_lookup& lookup, double tol )
{
  return holds( evaluate( c.lhs, lookup ), c.rel, evaluate( c.rhs, lookup ), tol );
}

bool may_hold( const constraint& c, const interval_lookup& lookup )
{
  const interval d = evaluate( c.lhs, lookup ) - evaluate( c.rhs, lookup );
  switch ( c.rel )
  {
  case relation::lt:
  case relation::le:
    return d.lo <= 0.0;
  case relation::eq:
    return d.contains( 0.0 );
  case relation::ge:
  case relation::gt:
    return d.hi >= 0.0;
  }
  return true;
}

} // namespace hyltl
