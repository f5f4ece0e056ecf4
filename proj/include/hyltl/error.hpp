#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyltl
{

/// Base exception. `code()` is a short machine-readable tag such as
/// `parse_error` or `unsupported_dynamics`.
class error : public std::runtime_error
{
public:
  error( std::string code, const std::string& message )
    : std::runtime_error( message ), code_( std::move( code ) )
  {
  }

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

struct source_position
{
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class parse_error : public error
{
public:
  parse_error( source_position pos, const std::string& message )
    : error( "parse_error", std::to_string( pos.line ) + ":" + std::to_string( pos.column ) + ": " + message ),
      pos_( pos )
  {
  }

  source_position position() const noexcept { return pos_; }

private:
  source_position pos_;
};

} // namespace hyltl
