#include "hyltl/cli.hpp"
#include "hyltl/model_io.hpp"
#include "hyltl/monitor.hpp"
#include "hyltl/trace_io.hpp"

#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace hyltl;
namespace fs = std::filesystem;

namespace
{

struct run_result
{
  int code;
  std::string out;
  std::string err;
};

run_result run( std::vector<std::string> args )
{
  args.insert( args.begin(), "hyltl-mc" );
  std::vector<const char*> argv;
  for ( const auto& a : args )
    argv.push_back( a.c_str() );
  std::ostringstream out, err;
  const int code = run_cli( static_cast<int>( argv.size() ), argv.data(), out, err );
  return { code, out.str(), err.str() };
}

std::string model_path( const char* name ) { return support::source_path( std::string( "models/" ) + name ); }

fs::path scratch( const std::string& name )
{
  const auto dir = fs::temp_directory_path() / "hyltl_cli_tests";
  fs::create_directories( dir );
  return dir / name;
}

} // namespace

TEST_SUITE( "cli" )
{
  TEST_CASE( "check exit codes" )
  {
    const auto ok = run( { "check", "--model", model_path( "thermostat.hyha" ), "--formula", "!F(x>=21 & X on)" } );
    CHECK( ok.code == 0 );
    CHECK( ok.out.find( "verdict: Verified" ) != std::string::npos );

    const auto bad = run( { "check", "--model", model_path( "thermostat.hyha" ), "--formula", "!F(x>=21 & X on" } );
    CHECK( bad.code == 1 );
    CHECK( bad.err.rfind( "ERROR code=parse_error pos=1:16", 0 ) == 0 );

    const auto relaxed = run( { "check", "--model", model_path( "thermostat_relaxed.hyha" ), "--formula", "!F(x>=21 & X on)" } );
    CHECK( relaxed.code == 2 );
    CHECK( relaxed.out.find( "hit idle." ) != std::string::npos );

    CHECK( run( { "check", "--model", model_path( "thermostat.hyha" ), "--formula", "F boil" } ).code == 1 );
    CHECK( run( { "check", "--model", "/nonexistent.hyha", "--formula", "true" } ).code == 1 );
    CHECK( run( { "bogus" } ).code == 1 );
  }

  TEST_CASE( "machine readable verdict" )
  {
    const auto r = run( { "check", "--model", model_path( "thermostat_init.hyha" ), "--formula", "G(x >= 15 & x <= 25)", "--machine" } );
    CHECK( r.code == 0 );
    const auto j = nlohmann::json::parse( r.out );
    CHECK( j.at( "verdict" ) == "Verified" );
    CHECK( j.at( "hits" ).empty() );
    CHECK( j.at( "step" ) == 0.01 );
  }

  TEST_CASE( "formula files and options" )
  {
    const auto f = scratch( "react.ltl" );
    write_file( f.string(), "!F(x >= 21 & X on)\n" );
    const auto r = run( { "check", "--model", model_path( "thermostat.hyha" ), "--formula-file", f.string(), "--horizon", "50",
                          "--step", "0.02", "--eps", "1e-5", "--no-prune", "--machine" } );
    CHECK( r.code == 0 );
    const auto j = nlohmann::json::parse( r.out );
    CHECK( j.at( "horizon" ) == 50.0 );
    CHECK( j.at( "pruned_locations" ) == j.at( "product_locations" ) );
    CHECK( run( { "check", "--model", model_path( "thermostat.hyha" ), "--formula", "true", "--step", "-1" } ).code == 1 );
  }

  TEST_CASE( "tolerance from the environment" )
  {
    ::setenv( "HYLTL_TOLERANCE", "not-a-number", 1 );
    CHECK( run( { "check", "--model", model_path( "thermostat.hyha" ), "--formula", "true" } ).code == 1 );
    ::setenv( "HYLTL_TOLERANCE", "1e-6", 1 );
    CHECK( run( { "check", "--model", model_path( "thermostat.hyha" ), "--formula", "!F(x>=21 & X on)" } ).code == 0 );
    ::unsetenv( "HYLTL_TOLERANCE" );
  }

  TEST_CASE( "config file" )
  {
    const auto cfg = scratch( "run.toml" );
    write_file( cfg.string(), "[check]\nhorizon = 40\n" );
    const auto r = run( { "--config", cfg.string(), "check", "--model", model_path( "thermostat.hyha" ), "--formula",
                          "!F(x>=21 & X on)", "--machine" } );
    REQUIRE( r.code == 0 );
    CHECK( nlohmann::json::parse( r.out ).at( "horizon" ) == 40.0 );
  }

  TEST_CASE( "translate" )
  {
    const auto t = run( { "translate", "--formula", "true", "--actions", "on,off" } );
    REQUIRE( t.code == 0 );
    const auto h = parse_model( t.out );
    // {on, off} together is inconsistent, so three sets remain
    CHECK( h.locations.size() == 3 );
    CHECK( h.acceptance.empty() );

    const auto u = run( { "translate", "--formula", "F(x>=21 & X on)" } );
    REQUIRE( u.code == 0 );
    const auto g = parse_model( u.out );
    CHECK( g.acceptance.size() == 1 );
    CHECK( g.variables == std::vector<std::string>{ "x" } );
    CHECK( u.out.find( "final" ) != std::string::npos );
    CHECK( isomorphic( parse_model( print_model( g ) ), g ) );
    CHECK( run( { "translate", "--formula", "F(x>=21 & X on)" } ).out == u.out );

    const auto out = scratch( "formula.hyha" );
    CHECK( run( { "translate", "--formula", "G(on -> F off)", "--model", model_path( "thermostat.hyha" ), "-o", out.string() } ).code == 0 );
    CHECK( load_model( out.string() ).locations.size() > 0 );
  }

  TEST_CASE( "compose" )
  {
    const auto r = run( { "compose", model_path( "thermostat.hyha" ), model_path( "thermostat_init.hyha" ) } );
    REQUIRE( r.code == 0 );
    CHECK( parse_model( r.out ).locations.size() == 4 );
  }

  TEST_CASE( "export" )
  {
    const auto r = run( { "export", model_path( "thermostat.hyha" ) } );
    REQUIRE( r.code == 0 );
    CHECK( r.out == read_file( support::source_path( "tests/golden/thermostat.pha" ) ) );
    const auto p = run( { "export", model_path( "thermostat.hyha" ), "--formula", "!F(x>=21 & X on)" } );
    CHECK( p.code == 0 );
    CHECK( p.out.find( "intersection_assign" ) != std::string::npos );
  }

  TEST_CASE( "simulate then monitor" )
  {
    const auto csv = scratch( "run.csv" ), log = scratch( "run.log" );
    const auto s = run( { "simulate", "--model", model_path( "thermostat_init.hyha" ), "--seed", "7", "--trace", csv.string(),
                          "--events", log.string() } );
    REQUIRE( s.code == 0 );
    const auto m = run( { "monitor", "--trace", csv.string(), "--events", log.string(), "--formula", "G(on -> F off)" } );
    CHECK( m.code == 0 );
    CHECK( m.out == "true\n" );
    const auto n = run( { "monitor", "--trace", csv.string(), "--events", log.string(), "--formula", "F G on", "--machine" } );
    CHECK( n.code == 0 );
    CHECK( nlohmann::json::parse( n.out ).at( "value" ) == false );

    // identical seeds give identical files
    const auto first = read_file( csv.string() );
    run( { "simulate", "--model", model_path( "thermostat_init.hyha" ), "--seed", "7", "--trace", csv.string(), "--events",
           log.string() } );
    CHECK( read_file( csv.string() ) == first );
  }

  TEST_CASE( "open initial values are bounded from the command line" )
  {
    const auto csv = scratch( "open.csv" ), log = scratch( "open.log" );
    CHECK( run( { "simulate", "--model", model_path( "thermostat.hyha" ), "--trace", csv.string(), "--events", log.string() } ).code == 1 );
    CHECK( run( { "simulate", "--model", model_path( "thermostat.hyha" ), "--trace", csv.string(), "--events", log.string(),
                  "--init", "x=19:21" } )
               .code == 0 );
  }

  TEST_CASE( "selftest" )
  {
    const auto r = run( { "selftest" } );
    CHECK( r.code == 0 );
    CHECK( r.out.find( "FAIL" ) == std::string::npos );
  }
}
