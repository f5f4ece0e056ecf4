#pragma once

// Export to the PhaVer input language and a reader for the subset the
// exporter writes.

#include "hyltl/hybrid.hpp"
#include "hyltl/product.hpp"

#include <string>

namespace hyltl
{

/// Location, variable and action names are made PhaVer-safe by replacing
/// '.' with "__". Acceptance sets are written as comments only. Throws
/// `nonlinear_export` for constraints that are not affine.
std::string export_phaver( const hybrid_automaton& h );

/// As above plus a script that intersects the reachable set with the
/// query states of the instrumentation.
std::string export_phaver( const instrumented_automaton& inst );

/// Reads the automaton block of an exported file; names are mapped back.
hybrid_automaton import_phaver( const std::string& text );

} // namespace hyltl
