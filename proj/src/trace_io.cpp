#include "hyltl/trace_io.hpp"

#include "hyltl/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

namespace hyltl
{

namespace
{

std::vector<std::string> split( const std::string& line, char sep )
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is( line );
  while ( std::getline( is, cell, sep ) )
  {
    const auto b = cell.find_first_not_of( " \t\r" );
    const auto e = cell.find_last_not_of( " \t\r" );
    out.push_back( b == std::string::npos ? "" : cell.substr( b, e - b + 1 ) );
  }
  return out;
}

double number( const std::string& s, std::size_t line )
{
  double v = 0.0;
  const auto [ p, ec ] = std::from_chars( s.data(), s.data() + s.size(), v );
  if ( ec != std::errc() || p != s.data() + s.size() )
    throw error( "trace_format", "line " + std::to_string( line ) + ": '" + s + "' is not a number" );
  return v;
}

std::size_t index( const std::string& s, std::size_t line )
{
  const double v = number( s, line );
  if ( v < 0 || v != std::floor( v ) )
    throw error( "trace_format", "line " + std::to_string( line ) + ": bad segment index '" + s + "'" );
  return static_cast<std::size_t>( v );
}

} // namespace

std::string write_trace_csv( const hybrid_lasso_trace& trace, bool derivatives )
{
  trace.validate();
  std::ostringstream os;
  os << std::setprecision( 17 );
  const auto& ref = trace.at( 0 ).trajectory.fstate();
  os << "segment,time";
  for ( const auto& [ v, _ ] : ref )
    os << ',' << v;
  if ( derivatives )
    for ( const auto& [ v, _ ] : ref )
      os << ",der(" << v << ')';
  os << '\n';
  for ( std::size_t i = 0; i < trace.length(); ++i )
  {
    const auto& t = trace.at( i ).trajectory;
    for ( std::size_t k = 0; k < t.samples.size(); ++k )
    {
      os << i << ',' << t.step * static_cast<double>( k );
      for ( const auto& [ _, x ] : t.samples[ k ] )
        os << ',' << x;
      if ( derivatives )
        for ( const auto& [ _, d ] : t.derivatives[ k ] )
          os << ',' << d;
      os << '\n';
    }
  }
  return os.str();
}

std::string write_trace_events( const hybrid_lasso_trace& trace )
{
  std::ostringstream os;
  for ( std::size_t i = 0; i < trace.length(); ++i )
    os << i << ' ' << trace.at( i ).action << '\n';
  os << "cycle_start " << trace.prefix.size() << '\n';
  return os.str();
}

hybrid_lasso_trace read_trace( const std::string& csv, const std::string& events )
{
  std::istringstream in( csv );
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while ( header.empty() && std::getline( in, line ) )
  {
    ++lineno;
    if ( line.find_first_not_of( " \t\r" ) != std::string::npos )
      header = split( line, ',' );
  }
  if ( header.size() < 2 || header[ 0 ] != "segment" || header[ 1 ] != "time" )
    throw error( "trace_format", "trace CSV must start with the header 'segment,time,...'" );

  struct column
  {
    std::string var;
    bool derivative;
  };
  std::vector<column> columns;
  for ( std::size_t c = 2; c < header.size(); ++c )
  {
    const auto& h = header[ c ];
    if ( h.rfind( "der(", 0 ) == 0 && h.back() == ')' )
      columns.push_back( { h.substr( 4, h.size() - 5 ), true } );
    else
      columns.push_back( { h, false } );
  }
  const bool has_der = std::any_of( columns.begin(), columns.end(), []( const column& c ) { return c.derivative; } );

  struct rows
  {
    std::vector<double> times;
    std::vector<valuation> samples, derivatives;
  };
  std::map<std::size_t, rows> segments;
  while ( std::getline( in, line ) )
  {
    ++lineno;
    if ( line.find_first_not_of( " \t\r" ) == std::string::npos )
      continue;
    const auto cells = split( line, ',' );
    if ( cells.size() != header.size() )
      throw error( "trace_format", "line " + std::to_string( lineno ) + ": expected " +
                                       std::to_string( header.size() ) + " fields" );
    auto& seg = segments[ index( cells[ 0 ], lineno ) ];
    seg.times.push_back( number( cells[ 1 ], lineno ) );
    valuation x, d;
    for ( std::size_t c = 0; c < columns.size(); ++c )
      ( columns[ c ].derivative ? d : x )[ columns[ c ].var ] = number( cells[ c + 2 ], lineno );
    seg.samples.push_back( std::move( x ) );
    seg.derivatives.push_back( std::move( d ) );
  }

  std::map<std::size_t, std::string> actions;
  std::optional<std::size_t> cycle_start;
  std::istringstream ev( events );
  lineno = 0;
  while ( std::getline( ev, line ) )
  {
    ++lineno;
    if ( auto hash = line.find( '#' ); hash != std::string::npos )
      line.erase( hash );
    std::istringstream ls( line );
    std::string a, b, rest;
    if ( !( ls >> a ) )
      continue;
    if ( !( ls >> b ) || ( ls >> rest ) )
      throw error( "trace_format", "events line " + std::to_string( lineno ) + ": expected two fields" );
    if ( a == "cycle_start" )
      cycle_start = index( b, lineno );
    else
      actions[ index( a, lineno ) ] = b;
  }
  if ( !cycle_start )
    throw error( "trace_format", "events file lacks a 'cycle_start' line" );

  hybrid_lasso_trace trace;
  std::size_t expected = 0;
  for ( auto& [ i, seg ] : segments )
  {
    if ( i != expected++ )
      throw error( "trace_format", "segment " + std::to_string( expected - 1 ) + " is missing" );
    if ( seg.times.size() < 2 )
      throw error( "trace_format", "segment " + std::to_string( i ) + " has fewer than two samples" );
    const double step = ( seg.times.back() - seg.times.front() ) / static_cast<double>( seg.times.size() - 1 );
    for ( std::size_t k = 1; k < seg.times.size(); ++k )
      if ( std::abs( seg.times[ k ] - seg.times[ k - 1 ] - step ) > 1e-6 * std::max( 1.0, step ) )
        throw error( "trace_format", "segment " + std::to_string( i ) + " is not uniformly sampled" );
    auto it = actions.find( i );
    if ( it == actions.end() )
      throw error( "trace_format", "segment " + std::to_string( i ) + " has no action" );
    auto traj = sampled_trajectory::make( step, std::move( seg.samples ),
                                          has_der ? std::move( seg.derivatives ) : std::vector<valuation>{} );
    ( i < *cycle_start ? trace.prefix : trace.cycle ).push_back( { std::move( traj ), it->second } );
  }
  trace.validate();
  return trace;
}

} // namespace hyltl
