#include "hyltl/error.hpp"
#include "hyltl/monitor.hpp"
#include "hyltl/trace_io.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace hyltl;

namespace
{

sampled_trajectory flat( double v )
{
  return sampled_trajectory::make( 1.0, { { { "x", v } }, { { "x", v } } } );
}

hybrid_lasso_trace word_trace( const support::lasso_word& w )
{
  hybrid_lasso_trace t;
  for ( const auto& a : w.prefix )
    t.prefix.push_back( { flat( 0 ), a } );
  for ( const auto& a : w.cycle )
    t.cycle.push_back( { flat( 0 ), a } );
  return t;
}

declarations thermostat_decl() { return support::model( "thermostat.hyha" ).decl(); }

} // namespace

TEST_SUITE( "monitor" )
{
  TEST_CASE( "constants" )
  {
    const auto t = word_trace( { { "a" }, { "b", "a" } } );
    for ( std::size_t i = 1; i <= 6; ++i )
    {
      CHECK( eval( t, formula::top(), i ) );
      CHECK_FALSE( eval( t, formula::bottom(), i ) );
    }
    CHECK_THROWS_AS( eval( t, formula::top(), 0 ), error );
  }

  TEST_CASE( "action atoms read the preceding action" )
  {
    const auto t = word_trace( { { "on" }, { "off", "on" } } );
    CHECK( eval( t, formula::next( formula::action( "on" ) ) ) );
    CHECK_FALSE( eval( t, formula::action( "on" ) ) );
    CHECK( eval( t, formula::negation( formula::action( "on" ) ) ) );
    CHECK( eval( t, formula::action( "off" ), 3 ) );
  }

  TEST_CASE( "reaction holds on simulated thermostat runs" )
  {
    const auto h = support::model( "thermostat_init.hyha" );
    const auto f = parse_formula( "G(on -> F off)", h.decl() );
    for ( std::uint64_t seed = 0; seed < 50; ++seed )
    {
      const auto g = random_trace( h, seed );
      CHECK( eval( g.trace, f ) );
    }
  }

  TEST_CASE( "sampled thermostat runs respect the invariants" )
  {
    const auto h = support::model( "thermostat_init.hyha" );
    for ( std::uint64_t seed = 0; seed < 50; ++seed )
    {
      const auto g = random_trace( h, seed );
      CHECK( is_generated( g.trace, h, g.witness ) );
      CHECK( random_trace( h, seed ).trace.length() == g.trace.length() );
      std::string last;
      for ( std::size_t i = 0; i < g.trace.length(); ++i )
      {
        const auto& s = g.trace.at( i );
        CHECK( s.action != last );
        last = s.action;
        for ( const auto& v : s.trajectory.samples )
        {
          CHECK( v.at( "x" ) >= 17 - 1e-9 );
          CHECK( v.at( "x" ) <= 23 + 1e-9 );
        }
      }
    }
  }

  TEST_CASE( "edge-free automaton has no cycle" )
  {
    hybrid_automaton h;
    h.variables = { "x" };
    h.actions = { "a" };
    h.locations = { { "p", {}, { constraint{ expr::variable( "x" ), relation::eq, expr::constant( 0 ) } }, {} } };
    h.initial = { 0 };
    CHECK_THROWS_WITH_AS( random_trace( h, 1 ), doctest::Contains( "no cycle found" ), error );
  }

  TEST_CASE( "open initial values need bounds" )
  {
    const auto h = support::model( "thermostat.hyha" );
    CHECK_THROWS_AS( random_trace( h, 1 ), error );
    random_trace_options o;
    o.initial[ "x" ] = { 19, 21 };
    CHECK_NOTHROW( random_trace( h, 1, o ) );
  }

  TEST_CASE( "agrees with the word semantics" )
  {
    const std::vector<std::string> ab{ "a", "b" };
    const auto words = support::lasso_words( ab, 3, 3 );
    for ( std::size_t size = 1; size <= 4; ++size )
      for ( const auto& f : support::formulas_of_size( size, ab ) )
        for ( const auto& w : words )
        {
          support::word_semantics sem( w );
          const bool expected = sem.holds( f, 1 );
          CHECK( eval_word( f, w.prefix, w.cycle ) == expected );
          CHECK( eval( word_trace( w ), f ) == expected );
        }
  }

  TEST_CASE( "eval_word rejects flow atoms" )
  {
    const auto f = parse_formula( "x >= 1", [] {
      declarations d;
      d.variables = { "x" };
      return d;
    }() );
    CHECK_THROWS_AS( eval_word( f, {}, { "a" } ), error );
  }

  TEST_CASE( "connectives are evaluated pointwise" )
  {
    std::mt19937_64 rng( 12 );
    const auto h = support::model( "thermostat_init.hyha" );
    std::vector<hybrid_lasso_trace> traces;
    for ( std::uint64_t seed = 0; seed < 10; ++seed )
      traces.push_back( random_trace( h, seed ).trace );
    auto with_actions = []( hybrid_lasso_trace t ) {
      // rename actions to the a/b alphabet of the random formulas
      for ( auto* part : { &t.prefix, &t.cycle } )
        for ( auto& s : *part )
          s.action = s.action == "on" ? "a" : "b";
      return t;
    };
    for ( int i = 0; i < 100; ++i )
    {
      const auto f = support::random_formula( rng, 3 ), g = support::random_formula( rng, 3 );
      for ( const auto& raw : traces )
      {
        const auto t = with_actions( raw );
        const auto tf = eval_all( t, f ), tg = eval_all( t, g );
        const auto conj = eval_all( t, formula::conjunction( f, g ) );
        const auto disj = eval_all( t, formula::disjunction( f, g ) );
        const auto neg = eval_all( t, formula::negation( f ) );
        const auto nxt = eval_all( t, formula::next( f ) );
        for ( std::size_t p = 1; p <= t.length() + 4; ++p )
        {
          CHECK( conj.at( p ) == ( tf.at( p ) && tg.at( p ) ) );
          CHECK( disj.at( p ) == ( tf.at( p ) || tg.at( p ) ) );
          CHECK( neg.at( p ) == !tf.at( p ) );
          CHECK( nxt.at( p ) == tf.at( p + 1 ) );
          CHECK( eval( t, f, p ) == tf.at( p ) );
        }
      }
    }
  }

  TEST_CASE( "truth is periodic past the prefix" )
  {
    std::mt19937_64 rng( 13 );
    const auto words = support::lasso_words( { "a", "b" }, 2, 3 );
    for ( int i = 0; i < 60; ++i )
    {
      const auto f = support::random_formula( rng, 3 );
      for ( std::size_t k = 0; k < words.size(); k += 7 )
      {
        const auto t = word_trace( words[ k ] );
        const std::size_t c = t.cycle.size();
        for ( std::size_t p = t.prefix.size() + 2; p <= t.prefix.size() + 2 + c; ++p )
          CHECK( eval( t, f, p ) == eval( t, f, p + c ) );
      }
    }
  }

  TEST_CASE( "flow atoms need every sample" )
  {
    const auto d = thermostat_decl();
    hybrid_lasso_trace t;
    t.cycle.push_back( { sampled_trajectory::make( 1.0, { { { "x", 22 } }, { { "x", 20 } } } ), "on" } );
    CHECK_FALSE( eval( t, parse_formula( "x >= 21", d ) ) );
    CHECK( eval( t, parse_formula( "!(x >= 21)", d ) ) );
    CHECK_FALSE( eval( t, parse_formula( "x < 21", d ) ) );
    CHECK( eval( t, parse_formula( "x <= 22", d ) ) );
  }
}

TEST_SUITE( "trace_io" )
{
  TEST_CASE( "csv round trip" )
  {
    const auto h = support::model( "thermostat_init.hyha" );
    const auto g = random_trace( h, 3 );
    const auto csv = write_trace_csv( g.trace ), events = write_trace_events( g.trace );
    CHECK( csv.rfind( "segment,time,x,der(x)\n", 0 ) == 0 );
    const auto back = read_trace( csv, events );
    REQUIRE( back.length() == g.trace.length() );
    CHECK( back.prefix.size() == g.trace.prefix.size() );
    for ( std::size_t i = 0; i < back.length(); ++i )
    {
      CHECK( back.at( i ).action == g.trace.at( i ).action );
      CHECK( back.at( i ).trajectory.samples.size() == g.trace.at( i ).trajectory.samples.size() );
      CHECK( back.at( i ).trajectory.lstate().at( "x" ) == doctest::Approx( g.trace.at( i ).trajectory.lstate().at( "x" ) ) );
    }
    const auto f = parse_formula( "G(on -> F off) & !F(x >= 21 & X on)", h.decl() );
    CHECK( eval( back, f ) == eval( g.trace, f ) );
    // derivatives can be dropped and re-estimated
    CHECK( read_trace( write_trace_csv( g.trace, false ), events ).length() == g.trace.length() );
  }

  TEST_CASE( "malformed input" )
  {
    CHECK_THROWS_AS( read_trace( "segment,time,x\n0,0,1\n0,1,oops\n", "0 on\ncycle_start 0\n" ), error );
    CHECK_THROWS_AS( read_trace( "segment,time,x\n0,0,1\n0,1,2\n", "0 on\n" ), error );
    CHECK_THROWS_AS( read_trace( "segment,time,x\n0,0,1\n0,1,2\n", "0 on\ncycle_start 3\n" ), error );
  }
}
