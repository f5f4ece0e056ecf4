#pragma once

#include "hyltl/hybrid.hpp"

#include <string>

namespace hyltl
{

/// Read the `.hyha` text format (grammar in docs/model-format.md).
hybrid_automaton parse_model( const std::string& text );
hybrid_automaton load_model( const std::string& path );

/// Deterministic rendering that `parse_model` reads back. Location
/// comments are emitted as `#` lines.
std::string print_model( const hybrid_automaton& h );

std::string read_file( const std::string& path );
void write_file( const std::string& path, const std::string& text );

} // namespace hyltl
