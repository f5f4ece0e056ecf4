#include "hyltl/formula.hpp"

#include "syntax.hpp"

namespace hyltl
{

namespace
{

using namespace syntax;

bool reserved( const std::string& s )
{
  return s == "X" || s == "U" || s == "R" || s == "F" || s == "G" || s == "true" || s == "false";
}

class formula_parser
{
public:
  formula_parser( token_stream& ts, const declarations& decl ) : ts_( ts ), decl_( decl )
  {
    ctx_.is_variable = [ this ]( const std::string& n ) { return !reserved( n ) && decl_.is_variable( n ); };
    ctx_.allow_dotted = true;
    ctx_.allow_primed = false;
  }

  formula implication()
  {
    formula l = disjunction();
    if ( ts_.accept( tok::arrow ) )
      return formula::implies( l, implication() );
    return l;
  }

private:
  formula disjunction()
  {
    formula l = conjunction();
    while ( ts_.accept( tok::pipe ) )
      l = formula::disjunction( l, conjunction() );
    return l;
  }

  formula conjunction()
  {
    formula l = temporal();
    while ( ts_.accept( tok::amp ) )
      l = formula::conjunction( l, temporal() );
    return l;
  }

  formula temporal()
  {
    formula l = unary();
    if ( ts_.accept_ident( "U" ) )
      return formula::until( l, temporal() );
    if ( ts_.accept_ident( "R" ) )
      return formula::release( l, temporal() );
    return l;
  }

  formula unary()
  {
    if ( ts_.accept( tok::bang ) )
      return formula::negation( unary() );
    if ( ts_.accept_ident( "X" ) )
      return formula::next( unary() );
    if ( ts_.accept_ident( "F" ) )
      return formula::eventually( unary() );
    if ( ts_.accept_ident( "G" ) )
      return formula::globally( unary() );
    return primary();
  }

  formula primary()
  {
    const token& t = ts_.peek();
    if ( t.kind == tok::ident )
    {
      if ( t.text == "true" )
      {
        ts_.next();
        return formula::top();
      }
      if ( t.text == "false" )
      {
        ts_.next();
        return formula::bottom();
      }
      if ( t.text == "U" || t.text == "R" )
        ts_.fail( "binary operator '" + t.text + "' is missing its left operand" );
      if ( decl_.is_action( t.text ) )
      {
        ts_.next();
        return formula::action( t.text );
      }
      if ( const auto* nc = decl_.find_constraint( t.text ); nc && !is_relation( ts_.peek( 1 ).kind ) )
      {
        ts_.next();
        return formula::flow( flow_atom{ nc->name, nc->condition } );
      }
      if ( !decl_.is_variable( t.text ) )
        ts_.fail( "unknown identifier '" + t.text + "'" );
    }
    else if ( t.kind != tok::lparen && t.kind != tok::number && t.kind != tok::minus && t.kind != tok::plus )
      ts_.fail( "expected a formula, found " + describe( t ) );

    // A parenthesis opens either an arithmetic group inside a comparison
    // or a nested formula. Try the comparison first.
    const auto start = ts_.mark();
    try
    {
      constraint c = parse_constraint( ts_, ctx_ );
      return formula::flow( flow_atom{ "", std::move( c ) } );
    }
    catch ( const parse_error& as_comparison )
    {
      if ( t.kind != tok::lparen )
        throw;
      ts_.reset( start );
      ts_.next();
      try
      {
        formula f = implication();
        ts_.expect( tok::rparen, "')'" );
        return f;
      }
      catch ( const parse_error& as_formula )
      {
        if ( as_comparison.position().offset > as_formula.position().offset )
          throw as_comparison;
        throw;
      }
    }
  }

  token_stream& ts_;
  const declarations& decl_;
  expr_context ctx_;
};

} // namespace

formula parse_formula( const std::string& text, const declarations& decl )
{
  token_stream ts( tokenize( text ) );
  if ( ts.at( tok::end ) )
    ts.fail( "empty formula" );
  formula_parser p( ts, decl );
  formula f = p.implication();
  if ( !ts.at( tok::end ) )
    ts.fail( "unexpected " + describe( ts.peek() ) + " after formula" );
  return f;
}

} // namespace hyltl
