#pragma once

// Lasso traces on disk: a CSV of samples with columns
// `segment,time,<vars>[,der(<var>)...]` and an events file with one
// `<segment> <action>` line per segment plus `cycle_start <segment>`.

#include "hyltl/hybrid.hpp"

#include <string>

namespace hyltl
{

std::string write_trace_csv( const hybrid_lasso_trace& trace, bool derivatives = true );
std::string write_trace_events( const hybrid_lasso_trace& trace );

/// Derivative columns are used when present, otherwise derivatives are
/// estimated by central differences. Throws `trace_format` on bad input.
hybrid_lasso_trace read_trace( const std::string& csv, const std::string& events );

} // namespace hyltl
