#include "hyltl/error.hpp"
#include "hyltl/hybrid.hpp"
#include "hyltl/model_io.hpp"
#include "hyltl/monitor.hpp"
#include "hyltl/tableau.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hyltl;

namespace
{

constraint cmp( expr l, relation r, expr rhs ) { return constraint{ std::move( l ), r, std::move( rhs ) }; }
expr x() { return expr::variable( "x" ); }
expr xp() { return expr::variable( "x", var_kind::primed ); }
expr xd() { return expr::variable( "x", var_kind::dotted ); }
expr num( double v ) { return expr::constant( v ); }

sampled_trajectory closed_form( double x0, double rate, double offset, double duration, double h )
{
  // x' = offset + rate * x
  std::vector<valuation> s;
  const int n = static_cast<int>( std::lround( duration / h ) );
  const double eq = -offset / rate;
  for ( int k = 0; k <= n; ++k )
    s.push_back( { { "x", eq + ( x0 - eq ) * std::exp( rate * k * h ) } } );
  return sampled_trajectory::make( h, s );
}

sampled_trajectory constant( double v )
{
  return sampled_trajectory::make( 0.5, { { { "x", v } }, { { "x", v } }, { { "x", v } } } );
}

} // namespace

TEST_SUITE( "hybrid" )
{
  TEST_CASE( "flow satisfaction" )
  {
    CHECK( satisfies_flow( constant( 20 ), cmp( x(), relation::ge, num( 17 ) ) ) );
    const auto tau = closed_form( 20, -0.2, 0, 1, 0.01 );
    CHECK( satisfies_flow( tau, cmp( xd(), relation::eq, num( -0.2 ) * x() ), 1e-3 ) );
    CHECK_FALSE( satisfies_flow( tau, cmp( x(), relation::ge, num( 19.9 ) ) ) );
    CHECK( tau.lstate().at( "x" ) == doctest::Approx( 16.3746 ).epsilon( 1e-4 ) );
    CHECK_THROWS_AS( satisfies_flow( tau, cmp( expr::variable( "z" ), relation::ge, num( 0 ) ) ), error );
  }

  TEST_CASE( "derivative conjuncts are skipped at the endpoints" )
  {
    // kink at both ends: only interior derivatives must satisfy the rate
    std::vector<valuation> s{ { { "x", 0.0 } }, { { "x", 5.0 } }, { { "x", 6.0 } }, { { "x", 7.0 } }, { { "x", 12.0 } } };
    const auto tau = sampled_trajectory::make( 1.0, s, { { { "x", 9.0 } }, { { "x", 1.0 } }, { { "x", 1.0 } }, { { "x", 1.0 } }, { { "x", 9.0 } } } );
    CHECK( satisfies_flow( tau, cmp( xd(), relation::eq, num( 1 ) ) ) );
  }

  TEST_CASE( "jump satisfaction" )
  {
    CHECK( satisfies_jump( { { "x", 19 } }, { { "x", 19 } }, cmp( xp(), relation::eq, x() ) ) );
    CHECK_FALSE( satisfies_jump( { { "x", 19 } }, { { "x", 25 } }, cmp( xp(), relation::eq, x() ) ) );
    CHECK( satisfies_jump( { { "x", 22 } }, { { "x", 22 } }, cmp( x(), relation::ge, num( 21 ) ) ) );
  }

  TEST_CASE( "restriction and union" )
  {
    const valuation a{ { "x", 1 }, { "y", 2 } }, b{ { "z", 3 } };
    CHECK( restrict( merge( a, b ), { "x", "y" } ) == a );
    CHECK( merge( a, { { "y", 2 }, { "w", 0 } } ).size() == 3 );
    CHECK_THROWS_WITH_AS( merge( a, { { "y", 5 } } ), doctest::Contains( "disagree" ), error );
  }

  TEST_CASE( "discrete steps of the thermostat" )
  {
    const auto h = support::model( "thermostat.hyha" );
    const auto idle = h.location_index( "idle" ), heat = h.location_index( "heat" );
    CHECK( discrete_step( h, { idle, { { "x", 18 } } }, "on" ) == std::vector<hybrid_state>{ { heat, { { "x", 18 } } } } );
    CHECK( discrete_step( h, { idle, { { "x", 20 } } }, "on" ).empty() );
    CHECK( discrete_step( h, { heat, { { "x", 22 } } }, "off" ) == std::vector<hybrid_state>{ { idle, { { "x", 22 } } } } );
    CHECK( discrete_step( h, { idle, { { "x", 18 } } }, "off" ).empty() );
    CHECK_THROWS_AS( discrete_step( h, { idle, { { "x", 10 } } }, "on" ), error );
  }

  TEST_CASE( "successors stay admissible" )
  {
    auto h = support::model( "thermostat.hyha" );
    // a reset that would leave heat's invariant
    h.edges[ 0 ].jump = { cmp( x(), relation::le, num( 19 ) ), cmp( xp(), relation::eq, x() + num( 5 ) ) };
    for ( double v = 17; v <= 19; v += 0.25 )
      for ( const auto& s : discrete_step( h, { 0, { { "x", v } } }, "on" ) )
        CHECK( admissible( h, s.loc, s.x ) );
    CHECK( discrete_step( h, { 0, { { "x", 19 } } }, "on" ).empty() );
    CHECK( discrete_step( h, { 0, { { "x", 17 } } }, "on" ).size() == 1 );
  }

  TEST_CASE( "generated traces and acceptance" )
  {
    auto h = support::model( "thermostat.hyha" );
    const auto idle = h.location_index( "idle" ), heat = h.location_index( "heat" );
    // idle from 20 until about 18, heat back to 21
    const double t_idle = std::log( 20.0 / 18.0 ) / 0.2;
    const double t_heat = std::log( ( 150.0 - 18.0 ) / ( 150.0 - 21.0 ) ) / 0.2;
    auto idle_seg = closed_form( 20, -0.2, 0, t_idle, t_idle / 200 );
    auto heat_seg = closed_form( idle_seg.lstate().at( "x" ), -0.2, 30, t_heat, t_heat / 200 );

    hybrid_lasso_trace single;
    single.cycle.push_back( { constant( 20 ), "off" } );
    CHECK( single.length() == 1 );

    // idle, then heat and idle forever
    hybrid_lasso_trace loop;
    const double t_back = std::log( heat_seg.lstate().at( "x" ) / idle_seg.lstate().at( "x" ) ) / 0.2;
    auto idle_back = closed_form( heat_seg.lstate().at( "x" ), -0.2, 0, t_back, t_back / 200 );
    loop.prefix.push_back( { idle_seg, "on" } );
    loop.cycle.push_back( { heat_seg, "off" } );
    loop.cycle.push_back( { idle_back, "on" } );
    // the cycle's closing state must match its start (heat from 18)
    const double tol = 1e-3;
    CHECK( is_generated( loop, h, { { idle }, { heat, idle } }, tol ) );
    CHECK_FALSE( is_generated( loop, h, { { heat }, { idle, heat } }, tol ) );

    CHECK( accepts( loop, h, { { idle }, { heat, idle } }, tol ) );
    h.acceptance = { { idle } };
    CHECK( accepts( loop, h, { { idle }, { heat, idle } }, tol ) );
    h.acceptance = { { idle }, { heat } };
    CHECK( accepts( loop, h, { { idle }, { heat, idle } }, tol ) );

    // a one-location cycle can only recur in idle
    h.acceptance = { { idle }, { heat } };
    hybrid_lasso_trace stay;
    stay.cycle.push_back( { constant( 20 ), "off" } );
    CHECK_FALSE( accepts( stay, h, { {}, { idle } }, tol ) );
    CHECK_THROWS_AS( is_generated( loop, h, { { idle }, { heat } } ), error );
  }

  TEST_CASE( "empty acceptance family accepts every generated trace" )
  {
    const auto h = support::model( "thermostat_init.hyha" );
    REQUIRE( h.acceptance.empty() );
    for ( std::uint64_t seed = 0; seed < 20; ++seed )
    {
      const auto g = random_trace( h, seed );
      CHECK( is_generated( g.trace, h, g.witness ) );
      CHECK( accepts( g.trace, h, g.witness ) == is_generated( g.trace, h, g.witness ) );
    }
  }

  TEST_CASE( "composition unit, size and commutativity" )
  {
    const auto t = support::model( "thermostat.hyha" );
    hybrid_automaton unit;
    unit.name = "unit";
    unit.locations.push_back( { "u", {}, {}, {} } );
    unit.initial = { 0 };
    const auto p = compose( t, unit );
    CHECK( p.locations.size() == 2 );
    CHECK( p.locations[ 0 ].name == "idle.u" );
    CHECK( isomorphic( p, t ) );

    std::mt19937_64 rng( 9 );
    for ( int i = 0; i < 30; ++i )
    {
      const auto a = support::random_gba( rng, 4, 2 ), b = support::random_gba( rng, 3, 2 );
      const auto ab = compose( a, b ), ba = compose( b, a );
      CHECK( ab.locations.size() == a.locations.size() * b.locations.size() );
      CHECK( isomorphic( ab, ba ) );
      const auto c = support::random_gba( rng, 2, 1 );
      CHECK( isomorphic( compose( compose( a, b ), c ), compose( a, compose( b, c ) ) ) );
    }
  }

  TEST_CASE( "composition with the negated reaction property" )
  {
    const auto t = support::model( "thermostat.hyha" );
    const auto d = t.decl();
    const auto neg = to_nnf( parse_formula( "F(x >= 21 & X on)", d ), d );
    const auto fa = build_formula_automaton( neg, t.variables, t.actions, d );
    const auto p = compose( t, fa.automaton );
    CHECK( p.locations.size() == 2 * fa.automaton.locations.size() );
    for ( const auto& e : p.edges )
    {
      if ( e.action != "on" )
        continue;
      const auto s = p.locations[ e.source ].name, u = p.locations[ e.target ].name;
      CHECK( s.rfind( "idle.", 0 ) == 0 );
      CHECK( u.rfind( "heat.", 0 ) == 0 );
      // system guard and reset carried over; formula edges add nothing
      CHECK( e.jump == t.edges[ 0 ].jump );
    }
  }

  TEST_CASE( "private variables of a non-owner are frozen" )
  {
    hybrid_automaton a, b;
    a.name = "a";
    a.variables = { "x" };
    a.actions = { "go" };
    a.locations = { { "p", {}, {}, {} } };
    a.edges = { { 0, 0, "go", {} } };
    a.initial = { 0 };
    b.name = "b";
    b.variables = { "y" };
    b.locations = { { "q", {}, {}, {} } };
    b.initial = { 0 };
    const auto p = compose( a, b );
    REQUIRE( p.edges.size() == 1 );
    const auto succ = discrete_step( p, { 0, { { "x", 1 }, { "y", 4 } } }, "go" );
    REQUIRE( succ.size() == 1 );
    CHECK( succ[ 0 ].x.at( "y" ) == 4 );
    bool frozen = false;
    for ( const auto& c : p.edges[ 0 ].jump )
      frozen = frozen || to_string( c ) == "y' = y";
    CHECK( frozen );
  }
}

TEST_SUITE( "model_io" )
{
  TEST_CASE( "bundled models round trip" )
  {
    for ( const char* name : { "thermostat.hyha", "thermostat_init.hyha", "thermostat_relaxed.hyha" } )
    {
      const auto h = support::model( name );
      const auto again = parse_model( print_model( h ) );
      CHECK( isomorphic( h, again ) );
      CHECK( print_model( again ) == print_model( h ) );
    }
  }

  TEST_CASE( "thermostat carries the published data" )
  {
    const auto h = support::model( "thermostat.hyha" );
    CHECK( h.variables == std::vector<std::string>{ "x" } );
    CHECK( h.actions == std::vector<std::string>{ "on", "off" } );
    REQUIRE( h.locations.size() == 2 );
    CHECK( to_string( h.locations[ 0 ].flow[ 0 ] ) == "der(x) = -0.2 * x" );
    CHECK( to_string( h.locations[ 1 ].flow[ 0 ] ) == "der(x) = 30 - 0.2 * x" );
    CHECK( h.initial == std::vector<std::size_t>{ 0 } );
  }

  TEST_CASE( "parse errors carry positions" )
  {
    auto code_at = []( const std::string& text ) -> std::string {
      try
      {
        parse_model( text );
      }
      catch ( const parse_error& e )
      {
        return std::to_string( e.position().line ) + ":" + std::to_string( e.position().column );
      }
      catch ( const error& e )
      {
        return e.code();
      }
      return "ok";
    };
    CHECK( code_at( "automaton a\nvars x;\nloc p { flow: x >= ; }\ninitial p;\n" ).rfind( "3:", 0 ) == 0 );
    CHECK( code_at( "automaton a\nvars x;\nloc p { flow: y >= 1; }\ninitial p;\n" ) == "3:15" );
    CHECK( code_at( "automaton a\nvars x;\nloc p { flow: x >= 1; }\ninitial q;\n" ) != "ok" );
    CHECK( code_at( "automaton a\nvars x;\nactions a;\nloc p { flow: x >= 1; }\nedge p -b-> p { }\ninitial p;\n" ) != "ok" );
  }
}
