#include "hyltl/closure.hpp"
#include "hyltl/error.hpp"
#include "hyltl/product.hpp"
#include "hyltl/tableau.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hyltl;

namespace
{

formula x_ge( double c )
{
  return formula::flow(
      flow_atom{ "", constraint{ expr::variable( "x" ), relation::ge, expr::constant( c ) } } );
}

declarations actions_only( std::vector<std::string> actions )
{
  declarations d;
  d.actions = std::move( actions );
  return d;
}

} // namespace

TEST_SUITE( "tableau" )
{
  TEST_CASE( "true over one action accepts every word" )
  {
    const auto fa = build_formula_automaton( formula::top(), {}, { "a" } );
    const auto& h = fa.automaton;
    REQUIRE( h.locations.size() == 2 );
    CHECK( h.acceptance.empty() );
    const auto a = *fa.closure.index_of( formula::action( "a" ) );
    REQUIRE( h.initial.size() == 1 );
    CHECK_FALSE( fa.sets[ h.initial[ 0 ] ].test( a ) );
    for ( const auto& e : h.edges )
      CHECK( fa.sets[ e.target ].test( a ) );
    for ( const auto& l : h.locations )
      CHECK( l.flow.empty() );
    for ( std::size_t c = 1; c <= 3; ++c )
      for ( const auto& w : support::lasso_words( { "a" }, 3, c ) )
        CHECK( accepts_word( h, w.prefix, w.cycle ) );
    // nothing to prune
    CHECK( isomorphic( prune_unreachable( h ), h ) );
  }

  TEST_CASE( "flow atom over one action" )
  {
    const auto fa = build_formula_automaton( x_ge( 1 ), { "x" }, { "a" } );
    const auto& h = fa.automaton;
    CHECK( h.locations.size() == 4 );
    REQUIRE( h.initial.size() == 1 );
    const auto& init = fa.sets[ h.initial[ 0 ] ];
    CHECK( init.test( *fa.closure.index_of( x_ge( 1 ) ) ) );
    CHECK( init.test( *fa.closure.index_of( formula::negation( formula::action( "a" ) ) ) ) );
    for ( std::size_t l = 0; l < h.locations.size(); ++l )
    {
      const bool has_c = fa.sets[ l ].test( *fa.closure.index_of( x_ge( 1 ) ) );
      CHECK( h.locations[ l ].flow.size() == ( has_c ? 1u : 0u ) );
      CHECK( h.locations[ l ].name == "M_" + fa.sets[ l ].to_hex() );
    }
    for ( const auto& e : h.edges )
      CHECK( e.jump.empty() );
  }

  TEST_CASE( "strict mode adds complements to flows" )
  {
    declarations d;
    d.variables = { "x" };
    d.actions = { "a" };
    d.constraints.push_back( { "big", constraint{ expr::variable( "x" ), relation::ge, expr::constant( 1 ) },
                               constraint{ expr::variable( "x" ), relation::lt, expr::constant( 1 ) } } );
    const auto f = parse_formula( "big", d );
    const auto plain = build_formula_automaton( f, { "x" }, { "a" }, d );
    const auto strict = build_formula_automaton( f, { "x" }, { "a" }, d, { true } );
    std::size_t plain_flows = 0, strict_flows = 0;
    for ( const auto& l : plain.automaton.locations )
      plain_flows += l.flow.size();
    for ( const auto& l : strict.automaton.locations )
      strict_flows += l.flow.size();
    CHECK( plain_flows == 2 );
    CHECK( strict_flows == 4 );
  }

  TEST_CASE( "one acceptance set per until" )
  {
    const auto d = support::model( "thermostat.hyha" ).decl();
    const auto fa = build_formula_automaton( to_nnf( parse_formula( "F(x >= 21 & X on)", d ), d ), { "x" }, { "on", "off" }, d );
    CHECK( fa.automaton.acceptance.size() == 1 );
    const auto g = build_formula_automaton( parse_formula( "(on U off) & (off U on)", d ), { "x" }, { "on", "off" }, d );
    CHECK( g.automaton.acceptance.size() == 2 );
  }

  TEST_CASE( "empty action set is rejected" )
  {
    CHECK_THROWS_AS( build_formula_automaton( formula::top(), {}, {} ), error );
  }

  TEST_CASE( "location count bound and valid sets" )
  {
    std::mt19937_64 rng( 21 );
    for ( int i = 0; i < 100; ++i )
    {
      const auto f = normalize( support::random_formula( rng, 3 ) );
      const auto fa = build_formula_automaton( f, { "x" }, { "a", "b" } );
      CHECK( static_cast<double>( fa.automaton.locations.size() ) <= std::pow( 2.0, fa.closure.size() / 2.0 ) );
      for ( const auto& m : fa.sets )
        CHECK( is_maximally_consistent( fa.closure, m ) );
    }
  }

  TEST_CASE( "edges exist for every consistent transfer" )
  {
    const auto d = actions_only( { "a", "b" } );
    const auto fa = build_formula_automaton( parse_formula( "a U X b", d ), {}, { "a", "b" } );
    const auto& cl = fa.closure;
    auto transfer_ok = [ & ]( const bitset& m, const bitset& n ) {
      for ( std::size_t i = 0; i < cl.size(); ++i )
      {
        const auto& g = cl.at( i );
        if ( g.is( formula_kind::next ) && m.test( i ) != n.test( *cl.index_of( g.child() ) ) )
          return false;
        if ( g.is( formula_kind::until ) )
        {
          const bool expect = m.test( *cl.index_of( g.rhs() ) ) || ( m.test( *cl.index_of( g.lhs() ) ) && n.test( i ) );
          if ( m.test( i ) != expect )
            return false;
        }
      }
      return true;
    };
    for ( std::size_t s = 0; s < fa.sets.size(); ++s )
      for ( std::size_t t = 0; t < fa.sets.size(); ++t )
        for ( const std::string a : { "a", "b" } )
        {
          const bool expected = fa.sets[ t ].test( *cl.index_of( formula::action( a ) ) ) && transfer_ok( fa.sets[ s ], fa.sets[ t ] );
          bool present = false;
          for ( const auto& e : fa.automaton.edges )
            present = present || ( e.source == s && e.target == t && e.action == a );
          CHECK( present == expected );
        }
  }

  TEST_CASE( "word language matches the semantics without normalizing first" )
  {
    const std::vector<std::string> ab{ "a", "b" };
    const auto words = support::lasso_words( ab, 2, 2 );
    for ( std::size_t size = 1; size <= 5; ++size )
      for ( const auto& f : support::formulas_of_size( size, ab ) )
      {
        const auto h = build_formula_automaton( f, {}, ab ).automaton;
        for ( const auto& w : words )
        {
          support::word_semantics sem( w );
          CHECK( accepts_word( h, w.prefix, w.cycle ) == sem.holds( f, 1 ) );
        }
      }
  }

  TEST_CASE( "pruning drops disconnected locations and keeps the language" )
  {
    hybrid_automaton h;
    h.actions = { "a" };
    h.locations = { { "p", {}, {}, {} }, { "q", {}, {}, {} }, { "island", {}, {}, {} } };
    h.edges = { { 0, 1, "a", {} }, { 1, 0, "a", {} }, { 2, 2, "a", {} } };
    h.initial = { 0 };
    const auto p = prune_unreachable( h );
    CHECK( p.locations.size() == 2 );
    CHECK_FALSE( p.find_location( "island" ) );

    std::mt19937_64 rng( 4 );
    const auto words = support::lasso_words( { "a", "b" }, 2, 3 );
    for ( int i = 0; i < 40; ++i )
    {
      const auto g = support::random_gba( rng, 5, 2 );
      const auto pg = prune_unreachable( g );
      CHECK( pg.locations.size() <= g.locations.size() );
      for ( const auto& w : words )
        CHECK( accepts_word( pg, w.prefix, w.cycle ) == accepts_word( g, w.prefix, w.cycle ) );
    }
  }
}

TEST_SUITE( "product" )
{
  TEST_CASE( "product size is twice the formula automaton" )
  {
    const auto t = support::model( "thermostat.hyha" );
    const auto d = t.decl();
    const auto phi = parse_formula( "!F(x >= 21 & X on)", d );
    const auto fa = build_formula_automaton( to_nnf( formula::negation( phi ), d ), t.variables, t.actions, d );
    const auto p = negate_and_build( phi, t );
    CHECK( p.locations.size() == 2 * fa.automaton.locations.size() );
  }

  TEST_CASE( "alphabet mismatch" )
  {
    const auto t = support::model( "thermostat.hyha" );
    declarations d;
    d.actions = { "boil" };
    CHECK_THROWS_WITH_AS( negate_and_build( parse_formula( "F boil", d ), t ), doctest::Contains( "boil" ), error );
  }

  TEST_CASE( "degeneralization" )
  {
    std::mt19937_64 rng( 8 );
    const auto words = support::lasso_words( { "a", "b" }, 3, 3 );
    for ( int i = 0; i < 60; ++i )
    {
      const auto g = support::random_gba( rng, 5, 3 );
      const auto d = degeneralize( g );
      CHECK( d.acceptance.size() <= 1 );
      if ( g.acceptance.size() <= 1 )
        CHECK( isomorphic( d, g ) );
      for ( const auto& w : words )
        CHECK( accepts_word( d, w.prefix, w.cycle ) == accepts_word( g, w.prefix, w.cycle ) );
    }
  }

  TEST_CASE( "degeneralizing two sets on a two-location cycle" )
  {
    hybrid_automaton h;
    h.actions = { "a", "b" };
    h.locations = { { "l1", {}, {}, {} }, { "l2", {}, {}, {} } };
    h.edges = { { 0, 0, "a", {} }, { 0, 1, "b", {} }, { 1, 1, "a", {} }, { 1, 0, "b", {} } };
    h.initial = { 0 };
    h.acceptance = { { 0 }, { 1 } };
    const auto d = degeneralize( h );
    CHECK( d.locations.size() == 4 );
    for ( std::size_t len = 1; len <= 6; ++len )
      for ( std::size_t c = 1; c <= len; ++c )
        for ( const auto& w : support::lasso_words( { "a", "b" }, len - c, c ) )
        {
          if ( w.prefix.size() + w.cycle.size() != len )
            continue;
          // both locations recur iff the cycle switches, i.e. contains b
          const bool switches = std::count( w.cycle.begin(), w.cycle.end(), "b" ) > 0;
          CHECK( accepts_word( d, w.prefix, w.cycle ) == switches );
        }
  }

  TEST_CASE( "reaction pipeline keeps a single until unchanged" )
  {
    const auto t = support::model( "thermostat.hyha" );
    const auto phi = parse_formula( "!F(x >= 21 & X on)", t.decl() );
    const auto p = prune_unreachable( negate_and_build( phi, t ) );
    CHECK( p.acceptance.size() == 1 );
    CHECK( print_model( degeneralize( p ) ) == print_model( p ) );
  }

  TEST_CASE( "instrumentation invariants" )
  {
    const auto t = support::model( "thermostat.hyha" );
    const auto phi = parse_formula( "!F(x >= 21 & X on)", t.decl() );
    const auto p = degeneralize( prune_unreachable( negate_and_build( phi, t ) ) );
    const auto inst = instrument( p );
    const auto& h = inst.automaton;
    CHECK( inst.flag == "f" );
    CHECK( inst.stores == std::vector<std::string>{ "y" } );
    CHECK( h.variables == std::vector<std::string>{ "x", "f", "y" } );
    // codes are distinct and nonzero, one per final location
    std::set<double> codes;
    for ( const auto& [ loc, code ] : inst.codes )
    {
      CHECK( code != 0.0 );
      codes.insert( code );
    }
    CHECK( codes.size() == inst.codes.size() );
    CHECK( inst.codes.size() == p.acceptance[ 0 ].size() );
    // original dynamics untouched, f and y frozen
    for ( std::size_t l = 0; l < p.locations.size(); ++l )
    {
      const auto& flow = h.locations[ l ].flow;
      for ( std::size_t k = 0; k < p.locations[ l ].flow.size(); ++k )
        CHECK( flow[ k ] == p.locations[ l ].flow[ k ] );
      std::vector<std::string> extra;
      for ( std::size_t k = p.locations[ l ].flow.size(); k < flow.size(); ++k )
        extra.push_back( to_string( flow[ k ] ) );
      CHECK( extra == std::vector<std::string>{ "der(f) = 0", "der(y) = 0" } );
    }
    // one freeze copy per edge, one guess copy per edge leaving a final location
    std::size_t leaving = 0;
    for ( const auto& e : p.edges )
      leaving += std::count( p.acceptance[ 0 ].begin(), p.acceptance[ 0 ].end(), e.source ) > 0;
    CHECK( h.edges.size() == p.edges.size() + leaving );
  }

  TEST_CASE( "empty acceptance makes every location final" )
  {
    hybrid_automaton h;
    h.variables = { "x" };
    h.actions = { "a" };
    h.locations = { { "p", {}, {}, {} }, { "q", {}, {}, {} } };
    h.edges = { { 0, 1, "a", {} } };
    h.initial = { 0 };
    CHECK( instrument( h ).codes.size() == 2 );
  }

  TEST_CASE( "name collisions are renamed with a warning" )
  {
    hybrid_automaton h;
    h.variables = { "f", "y" };
    h.actions = { "a" };
    h.locations = { { "p", {}, {}, {} } };
    h.edges = { { 0, 0, "a", {} } };
    h.initial = { 0 };
    const auto inst = instrument( h );
    CHECK( inst.flag == "f_1" );
    CHECK( inst.stores == std::vector<std::string>{ "y_1" } );
    CHECK( inst.warnings.size() == 2 );
  }

  TEST_CASE( "witness all stores each variable" )
  {
    hybrid_automaton h;
    h.variables = { "u", "v" };
    h.actions = { "a" };
    h.locations = { { "p", {}, {}, {} } };
    h.edges = { { 0, 0, "a", {} } };
    h.initial = { 0 };
    check_options o;
    o.witness_all = true;
    const auto inst = instrument( h, o );
    CHECK( inst.stores == std::vector<std::string>{ "y_u", "y_v" } );
    CHECK( inst.query.pairs.size() == 2 );
    o.witness_all = false;
    o.witness = "w";
    CHECK_THROWS_AS( instrument( h, o ), error );
  }

  TEST_CASE( "verdicts of the bundled examples" )
  {
    const auto t = support::model( "thermostat.hyha" );
    const auto relaxed = support::model( "thermostat_relaxed.hyha" );
    const auto init = support::model( "thermostat_init.hyha" );
    const auto d = t.decl();
    const auto react = parse_formula( "!F(x >= 21 & X on)", d );
    CHECK( check( react, t ).result == outcome::verified );
    CHECK( check( parse_formula( "G(x >= 15 & x <= 25)", d ), init ).result == outcome::verified );
    const auto bad = check( react, relaxed );
    CHECK( bad.result == outcome::inconclusive );
    CHECK_FALSE( bad.hits.empty() );
    const auto none = check( formula::bottom(), t );
    CHECK( none.result == outcome::inconclusive );
    CHECK_FALSE( none.hits.empty() );
  }

  TEST_CASE( "double negation and pruning do not change verdicts" )
  {
    const auto t = support::model( "thermostat.hyha" );
    const auto relaxed = support::model( "thermostat_relaxed.hyha" );
    const auto d = t.decl();
    check_options unpruned;
    unpruned.prune = false;
    for ( const char* text : { "!F(x >= 21 & X on)", "G(on -> F off)", "F off", "false" } )
    {
      const auto f = parse_formula( text, d );
      for ( const auto* sys : { &t, &relaxed } )
      {
        const auto v = check( f, *sys ).result;
        CHECK( check( formula::negation( formula::negation( f ) ), *sys ).result == v );
        CHECK( check( f, *sys, unpruned ).result == v );
      }
    }
  }

  TEST_CASE( "verdicts survive renaming and reordering" )
  {
    auto t = support::model( "thermostat.hyha" );
    const auto phi = parse_formula( "!F(x >= 21 & X on)", t.decl() );
    // swap location order and rename them
    auto r = t;
    std::swap( r.locations[ 0 ], r.locations[ 1 ] );
    r.locations[ 0 ].name = "warming";
    r.locations[ 1 ].name = "cooling";
    for ( auto& e : r.edges )
    {
      e.source = 1 - e.source;
      e.target = 1 - e.target;
    }
    r.initial = { 1 };
    CHECK( check( phi, r ).result == check( phi, t ).result );
  }

  TEST_CASE( "edge-free system is verified vacuously" )
  {
    hybrid_automaton h;
    h.name = "still";
    h.variables = { "x" };
    h.actions = { "on" };
    h.locations = { { "p", { constraint{ expr::variable( "x", var_kind::dotted ), relation::eq, expr::constant( 0 ) } },
                      { constraint{ expr::variable( "x" ), relation::eq, expr::constant( 5 ) } }, {} } };
    h.initial = { 0 };
    declarations d = h.decl();
    CHECK( check( parse_formula( "F on", d ), h ).result == outcome::verified );
  }

  TEST_CASE( "outcome names" )
  {
    CHECK( to_string( outcome::verified ) == "Verified" );
    CHECK( to_string( outcome::inconclusive ) == "Inconclusive" );
  }
}
