#include "syntax.hpp"

#include <cctype>
#include <charconv>

namespace hyltl::syntax
{

namespace
{

bool ident_start( char c )
{
  return std::isalpha( static_cast<unsigned char>( c ) ) || c == '_';
}

bool ident_char( char c )
{
  return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' || c == '.';
}

} // namespace

std::vector<token> tokenize( std::string_view text )
{
  std::vector<token> out;
  source_position pos;
  std::size_t i = 0;

  auto advance = [ & ]( std::size_t n ) {
    for ( std::size_t k = 0; k < n && i < text.size(); ++k, ++i )
    {
      if ( text[ i ] == '\n' )
      {
        ++pos.line;
        pos.column = 1;
      }
      else
        ++pos.column;
      pos.offset = i + 1;
    }
  };

  auto push = [ & ]( tok kind, std::size_t len ) {
    out.push_back( token{ kind, std::string( text.substr( i, len ) ), 0.0, pos } );
    advance( len );
  };

  while ( i < text.size() )
  {
    const char c = text[ i ];
    const char n = i + 1 < text.size() ? text[ i + 1 ] : '\0';
    if ( std::isspace( static_cast<unsigned char>( c ) ) )
    {
      advance( 1 );
      continue;
    }
    if ( c == '#' || ( c == '/' && n == '/' ) )
    {
      while ( i < text.size() && text[ i ] != '\n' )
        advance( 1 );
      continue;
    }
    if ( ident_start( c ) )
    {
      std::size_t len = 1;
      while ( i + len < text.size() && ident_char( text[ i + len ] ) )
        ++len;
      // trailing dots belong to the surrounding syntax, not the name
      while ( text[ i + len - 1 ] == '.' )
        --len;
      push( tok::ident, len );
      continue;
    }
    if ( std::isdigit( static_cast<unsigned char>( c ) ) || ( c == '.' && std::isdigit( static_cast<unsigned char>( n ) ) ) )
    {
      std::size_t len = 0;
      auto digits = [ & ] {
        while ( i + len < text.size() && std::isdigit( static_cast<unsigned char>( text[ i + len ] ) ) )
          ++len;
      };
      digits();
      if ( i + len < text.size() && text[ i + len ] == '.' )
      {
        ++len;
        digits();
      }
      if ( i + len < text.size() && ( text[ i + len ] == 'e' || text[ i + len ] == 'E' ) )
      {
        std::size_t save = len;
        ++len;
        if ( i + len < text.size() && ( text[ i + len ] == '+' || text[ i + len ] == '-' ) )
          ++len;
        const std::size_t before = len;
        digits();
        if ( len == before )
          len = save;
      }
      token t{ tok::number, std::string( text.substr( i, len ) ), 0.0, pos };
      auto res = std::from_chars( t.text.data(), t.text.data() + t.text.size(), t.number );
      if ( res.ec != std::errc() )
        throw parse_error( pos, "malformed number '" + t.text + "'" );
      out.push_back( std::move( t ) );
      advance( len );
      continue;
    }
    switch ( c )
    {
    case '(':
      push( tok::lparen, 1 );
      continue;
    case ')':
      push( tok::rparen, 1 );
      continue;
    case '{':
      push( tok::lbrace, 1 );
      continue;
    case '}':
      push( tok::rbrace, 1 );
      continue;
    case '[':
      push( tok::lbracket, 1 );
      continue;
    case ']':
      push( tok::rbracket, 1 );
      continue;
    case ',':
      push( tok::comma, 1 );
      continue;
    case ';':
      push( tok::semicolon, 1 );
      continue;
    case ':':
      if ( n == '=' )
        push( tok::assign, 2 );
      else
        push( tok::colon, 1 );
      continue;
    case '\'':
      push( tok::prime, 1 );
      continue;
    case '+':
      push( tok::plus, 1 );
      continue;
    case '-':
      if ( n == '>' )
        push( tok::arrow, 2 );
      else
        push( tok::minus, 1 );
      continue;
    case '*':
      push( tok::star, 1 );
      continue;
    case '/':
      push( tok::slash, 1 );
      continue;
    case '<':
      if ( n == '=' )
        push( tok::le, 2 );
      else
        push( tok::lt, 1 );
      continue;
    case '>':
      if ( n == '=' )
        push( tok::ge, 2 );
      else
        push( tok::gt, 1 );
      continue;
    case '=':
      push( tok::eq, n == '=' ? 2 : 1 );
      continue;
    case '!':
      push( tok::bang, 1 );
      continue;
    case '&':
      push( tok::amp, n == '&' ? 2 : 1 );
      continue;
    case '|':
      push( tok::pipe, n == '|' ? 2 : 1 );
      continue;
    default:
      throw parse_error( pos, std::string( "unexpected character '" ) + c + "'" );
    }
  }
  out.push_back( token{ tok::end, "", 0.0, pos } );
  return out;
}

std::string describe( const token& t )
{
  if ( t.kind == tok::end )
    return "end of input";
  return "'" + t.text + "'";
}

const token& token_stream::peek( std::size_t ahead ) const
{
  const std::size_t i = std::min( pos_ + ahead, tokens_.size() - 1 );
  return tokens_[ i ];
}

const token& token_stream::next()
{
  const token& t = tokens_[ pos_ ];
  if ( pos_ + 1 < tokens_.size() )
    ++pos_;
  return t;
}

bool token_stream::accept( tok kind )
{
  if ( !at( kind ) )
    return false;
  next();
  return true;
}

bool token_stream::accept_ident( std::string_view text )
{
  if ( !at_ident( text ) )
    return false;
  next();
  return true;
}

const token& token_stream::expect( tok kind, std::string_view what )
{
  if ( !at( kind ) )
    fail( "expected " + std::string( what ) + ", found " + describe( peek() ) );
  return next();
}

void token_stream::expect_ident( std::string_view text )
{
  if ( !accept_ident( text ) )
    fail( "expected '" + std::string( text ) + "', found " + describe( peek() ) );
}

std::string token_stream::expect_name( std::string_view what )
{
  return expect( tok::ident, what ).text;
}

void token_stream::fail( const std::string& message ) const
{
  throw parse_error( peek().pos, message );
}

void token_stream::fail_at( const token& t, const std::string& message ) const
{
  throw parse_error( t.pos, message );
}

namespace
{

expr parse_sum( token_stream& ts, const expr_context& ctx );

expr parse_primary( token_stream& ts, const expr_context& ctx )
{
  const token& t = ts.peek();
  if ( t.kind == tok::number )
  {
    ts.next();
    return expr::constant( t.number );
  }
  if ( t.kind == tok::lparen )
  {
    ts.next();
    expr e = parse_sum( ts, ctx );
    ts.expect( tok::rparen, "')'" );
    return e;
  }
  if ( t.kind == tok::ident )
  {
    const token name = ts.next();
    if ( name.text == "sin" || name.text == "cos" || name.text == "exp" )
    {
      ts.expect( tok::lparen, "'(' after " + name.text );
      expr arg = parse_sum( ts, ctx );
      ts.expect( tok::rparen, "')'" );
      const auto op = name.text == "sin" ? expr_op::sin : name.text == "cos" ? expr_op::cos : expr_op::exp;
      return expr::unary( op, std::move( arg ) );
    }
    if ( name.text == "der" )
    {
      if ( !ctx.allow_dotted )
        ts.fail_at( name, "derivatives are not allowed here" );
      ts.expect( tok::lparen, "'(' after der" );
      const token v = ts.expect( tok::ident, "variable name" );
      if ( !ctx.is_variable( v.text ) )
        ts.fail_at( v, "unknown variable '" + v.text + "'" );
      ts.expect( tok::rparen, "')'" );
      return expr::variable( v.text, var_kind::dotted );
    }
    if ( !ctx.is_variable( name.text ) )
      ts.fail_at( name, "unknown identifier '" + name.text + "'" );
    if ( ts.at( tok::prime ) )
    {
      const token p = ts.next();
      if ( ctx.prime_means_dot )
        return expr::variable( name.text, var_kind::dotted );
      if ( !ctx.allow_primed )
        ts.fail_at( p, "primed variables are not allowed here" );
      return expr::variable( name.text, var_kind::primed );
    }
    return expr::variable( name.text );
  }
  ts.fail( "expected an expression, found " + describe( t ) );
}

expr parse_unary( token_stream& ts, const expr_context& ctx )
{
  if ( ts.at( tok::minus ) )
  {
    ts.next();
    if ( ts.at( tok::number ) )
    {
      const double v = ts.next().number;
      return expr::constant( -v );
    }
    return expr::unary( expr_op::neg, parse_unary( ts, ctx ) );
  }
  if ( ts.at( tok::plus ) )
  {
    ts.next();
    return parse_unary( ts, ctx );
  }
  return parse_primary( ts, ctx );
}

expr parse_product( token_stream& ts, const expr_context& ctx )
{
  expr e = parse_unary( ts, ctx );
  while ( ts.at( tok::star ) || ts.at( tok::slash ) )
  {
    const auto op = ts.next().kind == tok::star ? expr_op::mul : expr_op::div;
    e = expr::binary( op, e, parse_unary( ts, ctx ) );
  }
  return e;
}

expr parse_sum( token_stream& ts, const expr_context& ctx )
{
  expr e = parse_product( ts, ctx );
  while ( ts.at( tok::plus ) || ts.at( tok::minus ) )
  {
    const auto op = ts.next().kind == tok::plus ? expr_op::add : expr_op::sub;
    e = expr::binary( op, e, parse_product( ts, ctx ) );
  }
  return e;
}

} // namespace

expr parse_expr( token_stream& ts, const expr_context& ctx )
{
  return parse_sum( ts, ctx );
}

bool is_relation( tok kind )
{
  return kind == tok::lt || kind == tok::le || kind == tok::eq || kind == tok::ge || kind == tok::gt;
}

relation to_relation( tok kind )
{
  switch ( kind )
  {
  case tok::lt:
    return relation::lt;
  case tok::le:
    return relation::le;
  case tok::ge:
    return relation::ge;
  case tok::gt:
    return relation::gt;
  default:
    return relation::eq;
  }
}

constraint parse_constraint( token_stream& ts, const expr_context& ctx )
{
  expr lhs = parse_expr( ts, ctx );
  if ( !is_relation( ts.peek().kind ) )
    ts.fail( "expected a comparison operator, found " + describe( ts.peek() ) );
  const relation rel = to_relation( ts.next().kind );
  expr rhs = parse_expr( ts, ctx );
  return constraint{ std::move( lhs ), rel, std::move( rhs ) };
}

} // namespace hyltl::syntax
