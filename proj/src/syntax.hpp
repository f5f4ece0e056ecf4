#pragma once

// Tokenizer and arithmetic/constraint parser shared by the formula,
// model and PhaVer readers.

#include "hyltl/error.hpp"
#include "hyltl/expr.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hyltl::syntax
{

enum class tok
{
  end,
  ident,
  number,
  lparen,
  rparen,
  lbrace,
  rbrace,
  lbracket,
  rbracket,
  comma,
  semicolon,
  colon,
  prime,
  plus,
  minus,
  star,
  slash,
  lt,
  le,
  eq,
  ge,
  gt,
  bang,
  amp,
  pipe,
  arrow,
  assign
};

struct token
{
  tok kind = tok::end;
  std::string text;
  double number = 0.0;
  source_position pos;
};

/// `#` and `//` start comments running to the end of the line.
std::vector<token> tokenize( std::string_view text );

std::string describe( const token& t );

class token_stream
{
public:
  explicit token_stream( std::vector<token> tokens ) : tokens_( std::move( tokens ) ) {}

  const token& peek( std::size_t ahead = 0 ) const;
  const token& next();
  bool at( tok kind ) const { return peek().kind == kind; }
  bool at_ident( std::string_view text ) const { return peek().kind == tok::ident && peek().text == text; }
  bool accept( tok kind );
  bool accept_ident( std::string_view text );
  const token& expect( tok kind, std::string_view what );
  void expect_ident( std::string_view text );
  std::string expect_name( std::string_view what );

  std::size_t mark() const { return pos_; }
  void reset( std::size_t mark ) { pos_ = mark; }

  [[noreturn]] void fail( const std::string& message ) const;
  [[noreturn]] void fail_at( const token& t, const std::string& message ) const;

private:
  std::vector<token> tokens_;
  std::size_t pos_ = 0;
};

struct expr_context
{
  std::function<bool( const std::string& )> is_variable;
  bool allow_dotted = true;
  bool allow_primed = false;
  /// PhaVer writes derivatives as `x'` inside flows.
  bool prime_means_dot = false;
};

expr parse_expr( token_stream& ts, const expr_context& ctx );
bool is_relation( tok kind );
relation to_relation( tok kind );
constraint parse_constraint( token_stream& ts, const expr_context& ctx );

} // namespace hyltl::syntax
