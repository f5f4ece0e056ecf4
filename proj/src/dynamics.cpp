#include "hyltl/dynamics.hpp"

#include "hyltl/error.hpp"

#include <algorithm>
#include <limits>

namespace hyltl
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

std::size_t index_of( const std::vector<std::string>& vars, const std::string& name )
{
  auto it = std::find( vars.begin(), vars.end(), name );
  if ( it == vars.end() )
    throw error( "unknown_variable", "variable '" + name + "' is not declared" );
  return static_cast<std::size_t>( it - vars.begin() );
}

interval_lookup box_lookup( const box& b, const std::vector<std::string>& vars )
{
  return [ &b, &vars ]( const var_ref& v ) -> interval {
    if ( v.kind != var_kind::plain )
      return interval::entire();
    return b[ index_of( vars, v.name ) ];
  };
}

/// Non-strict relation of `k * v` against the rest, flipped for k < 0.
relation normalize_rel( relation r, double k )
{
  if ( r == relation::lt )
    r = relation::le;
  if ( r == relation::gt )
    r = relation::ge;
  return k < 0 ? mirror( r ) : r;
}

/// Tighten b by `sum a_j x_j + k (rel) 0`. False when certainly empty.
bool contract_linear( box& b, const linear_form& lf, relation rel, const std::vector<std::string>& vars )
{
  std::vector<std::pair<std::size_t, double>> terms;
  for ( const auto& [ v, a ] : lf.coeffs )
    if ( a != 0.0 )
      terms.emplace_back( index_of( vars, v.name ), a );
  auto total = [ & ]( std::size_t skip ) {
    interval s = interval::point( lf.constant );
    for ( std::size_t t = 0; t < terms.size(); ++t )
      if ( t != skip )
        s = s + scale( terms[ t ].second, b[ terms[ t ].first ] );
    return s;
  };
  const bool upper = rel == relation::le || rel == relation::lt || rel == relation::eq;
  const bool lower = rel == relation::ge || rel == relation::gt || rel == relation::eq;
  if ( terms.empty() )
  {
    const interval s = total( terms.size() );
    return !( ( upper && s.lo > 0.0 ) || ( lower && s.hi < 0.0 ) );
  }
  for ( int pass = 0; pass < 2; ++pass )
    for ( std::size_t t = 0; t < terms.size(); ++t )
    {
      const auto [ j, a ] = terms[ t ];
      // a x_j (rel) -rest
      const interval rhs = -total( t );
      const interval q = rhs / interval::point( a );
      interval& x = b[ j ];
      const bool up = a > 0 ? upper : lower;
      const bool down = a > 0 ? lower : upper;
      if ( up )
        x.hi = std::min( x.hi, q.hi );
      if ( down )
        x.lo = std::max( x.lo, q.lo );
      if ( x.is_empty() )
        return false;
    }
  return true;
}

} // namespace

std::optional<box> contract( const box& b, const std::vector<constraint>& cs, const std::vector<std::string>& variables )
{
  box out = b;
  if ( out.is_empty() )
    return std::nullopt;
  for ( const auto& c : cs )
  {
    if ( auto lf = linearize( c ) )
    {
      if ( !contract_linear( out, *lf, c.rel, variables ) )
        return std::nullopt;
    }
    else if ( !may_hold( c, box_lookup( out, variables ) ) )
      return std::nullopt;
  }
  return out;
}

box bounding_box( const std::vector<constraint>& cs, const std::vector<std::string>& variables )
{
  auto b = contract( box::entire( variables.size() ), cs, variables );
  if ( !b )
  {
    box empty( variables.size() );
    for ( std::size_t i = 0; i < variables.size(); ++i )
      empty[ i ] = { inf, -inf };
    return empty;
  }
  return *b;
}

bool compiled_flow::all_affine() const
{
  return std::all_of( modes.begin(), modes.end(), []( derivative_mode m ) { return m == derivative_mode::affine; } );
}

box compiled_flow::derivative( const box& b ) const
{
  const std::size_t n = variables.size();
  box d = box::entire( n );
  auto lookup = box_lookup( b, variables );
  for ( std::size_t i = 0; i < n; ++i )
  {
    if ( modes[ i ] == derivative_mode::affine )
    {
      interval s = interval::point( c( static_cast<Eigen::Index>( i ) ) );
      for ( std::size_t j = 0; j < n; ++j )
      {
        const double aij = a( static_cast<Eigen::Index>( i ), static_cast<Eigen::Index>( j ) );
        if ( aij != 0.0 )
          s = s + scale( aij, b[ j ] );
      }
      d[ i ] = s;
    }
    else if ( modes[ i ] == derivative_mode::inclusion )
      for ( const auto& bd : bounds[ i ] )
      {
        const interval v = evaluate( bd.bound, lookup );
        if ( bd.rel != relation::ge )
          d[ i ].hi = std::min( d[ i ].hi, v.hi );
        if ( bd.rel != relation::le )
          d[ i ].lo = std::max( d[ i ].lo, v.lo );
      }
  }
  return d;
}

std::optional<box> compiled_flow::contract( const box& b ) const
{
  return hyltl::contract( b, invariants, variables );
}

compiled_flow compile_flow( const std::vector<constraint>& flow, const std::vector<std::string>& variables )
{
  const std::size_t n = variables.size();
  compiled_flow out;
  out.variables = variables;
  out.modes.assign( n, derivative_mode::free );
  out.a = Eigen::MatrixXd::Zero( static_cast<Eigen::Index>( n ), static_cast<Eigen::Index>( n ) );
  out.c = Eigen::VectorXd::Zero( static_cast<Eigen::Index>( n ) );
  out.bounds.resize( n );

  for ( const auto& con : flow )
  {
    if ( mentions( con, var_kind::primed ) )
      throw error( "unsupported_dynamics", "primed variable in flow constraint " + to_string( con ) );
    std::vector<var_ref> dotted;
    for ( const auto& v : hyltl::variables( con ) )
    {
      index_of( variables, v.name );
      if ( v.kind == var_kind::dotted )
        dotted.push_back( v );
    }
    if ( dotted.empty() )
    {
      out.invariants.push_back( con );
      continue;
    }
    if ( dotted.size() > 1 )
      throw error( "unsupported_dynamics", "unsupported dynamics form: " + to_string( con ) );
    const var_ref d = dotted.front();
    const std::size_t i = index_of( variables, d.name );
    const auto ii = static_cast<Eigen::Index>( i );

    if ( auto lf = linearize( con ) )
    {
      const double k = lf->coeff( d );
      if ( k == 0.0 )
        throw error( "unsupported_dynamics", "unsupported dynamics form: " + to_string( con ) );
      // k der(x) + rest (rel) 0  =>  der(x) (rel') -rest/k
      if ( con.rel == relation::eq )
      {
        if ( out.modes[ i ] == derivative_mode::affine )
          continue;
        out.modes[ i ] = derivative_mode::affine;
        out.bounds[ i ].clear();
        out.c( ii ) = -lf->constant / k;
        for ( const auto& [ v, a ] : lf->coeffs )
          if ( !( v == d ) )
            out.a( ii, static_cast<Eigen::Index>( index_of( variables, v.name ) ) ) = -a / k;
        continue;
      }
      if ( out.modes[ i ] == derivative_mode::affine )
        continue;
      expr rest = expr::constant( -lf->constant / k );
      for ( const auto& [ v, a ] : lf->coeffs )
        if ( !( v == d ) )
          rest = rest + expr::constant( -a / k ) * expr::variable( v );
      out.modes[ i ] = derivative_mode::inclusion;
      out.bounds[ i ].push_back( { normalize_rel( con.rel, k ), rest } );
      continue;
    }

    // nonlinear: only `der(x) (rel) f(X)` and its mirror image
    std::optional<derivative_bound> bd;
    if ( con.lhs.op() == expr_op::variable && con.lhs.var() == d )
      bd = derivative_bound{ normalize_rel( con.rel, 1.0 ), con.rhs };
    else if ( con.rhs.op() == expr_op::variable && con.rhs.var() == d )
      bd = derivative_bound{ normalize_rel( mirror( con.rel ), 1.0 ), con.lhs };
    if ( !bd )
      throw error( "unsupported_dynamics", "unsupported dynamics form: " + to_string( con ) );
    if ( out.modes[ i ] == derivative_mode::affine )
      continue;
    out.modes[ i ] = derivative_mode::inclusion;
    out.bounds[ i ].push_back( *bd );
  }
  return out;
}

compiled_jump compile_jump( const std::vector<constraint>& jump, const std::vector<std::string>& variables )
{
  compiled_jump out;
  out.variables = variables;
  std::vector<bool> assigned( variables.size(), false );
  for ( const auto& con : jump )
  {
    if ( mentions( con, var_kind::dotted ) )
      throw error( "unsupported_reset", "derivative in jump constraint " + to_string( con ) );
    std::vector<var_ref> primed;
    bool plain = false;
    for ( const auto& v : hyltl::variables( con ) )
    {
      index_of( variables, v.name );
      if ( v.kind == var_kind::primed )
        primed.push_back( v );
      else
        plain = true;
    }
    if ( primed.empty() )
    {
      out.guards.push_back( con );
      continue;
    }
    if ( !plain )
    {
      auto unprime = []( const var_ref& v ) -> std::optional<expr> { return expr::variable( v.name ); };
      out.post.push_back( constraint{ con.lhs.substitute( unprime ), con.rel, con.rhs.substitute( unprime ) } );
      continue;
    }
    if ( primed.size() != 1 || con.rel != relation::eq )
      throw error( "unsupported_reset", "unsupported reset form: " + to_string( con ) );
    const var_ref target = primed.front();
    const std::size_t i = index_of( variables, target.name );
    std::optional<expr> value;
    if ( auto lf = linearize( con ) )
    {
      const double k = lf->coeff( target );
      if ( k != 0.0 )
      {
        // the common x' = x shape keeps its exact form
        if ( con.lhs.op() == expr_op::variable && con.lhs.var() == target )
          value = con.rhs;
        else if ( con.rhs.op() == expr_op::variable && con.rhs.var() == target )
          value = con.lhs;
        else
        {
          expr e = expr::constant( -lf->constant / k );
          for ( const auto& [ v, a ] : lf->coeffs )
            if ( !( v == target ) )
              e = e + expr::constant( -a / k ) * expr::variable( v );
          value = e;
        }
      }
    }
    else if ( con.lhs.op() == expr_op::variable && con.lhs.var() == target )
      value = con.rhs;
    else if ( con.rhs.op() == expr_op::variable && con.rhs.var() == target )
      value = con.lhs;
    if ( !value )
      throw error( "unsupported_reset", "unsupported reset form: " + to_string( con ) );
    if ( assigned[ i ] )
    {
      auto first = std::find_if( out.assignments.begin(), out.assignments.end(),
                                 [ & ]( const auto& asg ) { return asg.var == i; } );
      if ( first->value == *value )
        continue;
      throw error( "unsupported_reset", "conflicting resets of " + target.name + "'" );
    }
    assigned[ i ] = true;
    out.assignments.push_back( { i, *value } );
  }
  return out;
}

std::optional<box> compiled_jump::image( const box& b ) const
{
  auto pre = contract( b, guards, variables );
  if ( !pre )
    return std::nullopt;
  box post = box::entire( variables.size() );
  auto lookup = box_lookup( *pre, variables );
  for ( const auto& asg : assignments )
  {
    const expr& e = asg.value;
    // identity resets copy the interval exactly
    if ( e.op() == expr_op::variable && e.var().kind == var_kind::plain )
      post[ asg.var ] = ( *pre )[ index_of( variables, e.var().name ) ];
    else
      post[ asg.var ] = evaluate( e, lookup );
  }
  return contract( post, this->post, variables );
}

} // namespace hyltl
