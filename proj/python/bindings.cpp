#include "hyltl/error.hpp"
#include "hyltl/model_io.hpp"
#include "hyltl/monitor.hpp"
#include "hyltl/phaver.hpp"
#include "hyltl/product.hpp"
#include "hyltl/tableau.hpp"
#include "hyltl/trace_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hyltl;

namespace
{

declarations make_decl( std::vector<std::string> variables, std::vector<std::string> actions )
{
  declarations d;
  d.variables = std::move( variables );
  d.actions = std::move( actions );
  return d;
}

py::dict verdict_dict( const verdict& v )
{
  py::dict d;
  d[ "verdict" ] = to_string( v.result );
  d[ "reason" ] = v.reason;
  d[ "product_locations" ] = v.product_locations;
  d[ "pruned_locations" ] = v.pruned_locations;
  d[ "reached_boxes" ] = v.reached_boxes;
  d[ "horizon_bounded" ] = v.horizon_bounded;
  d[ "seconds" ] = v.seconds;
  d[ "warnings" ] = v.warnings;
  py::list hits;
  for ( std::size_t k = 0; k < v.hits.size(); ++k )
  {
    py::dict box;
    for ( std::size_t i = 0; i < v.variables.size(); ++i )
      box[ py::str( v.variables[ i ] ) ] = py::make_tuple( v.hits[ k ].region[ i ].lo, v.hits[ k ].region[ i ].hi );
    hits.append( py::make_tuple( v.hit_locations[ k ], box ) );
  }
  d[ "hits" ] = hits;
  return d;
}

} // namespace

PYBIND11_MODULE( _hyltl, m )
{
  m.doc() = "HyLTL model checking for hybrid automata";

  static py::exception<error> hyltl_error( m, "Error", PyExc_RuntimeError );
  py::register_exception_translator( []( std::exception_ptr p ) {
    try
    {
      if ( p )
        std::rethrow_exception( p );
    }
    catch ( const error& e )
    {
      py::set_error( hyltl_error, ( e.code() + ": " + e.what() ).c_str() );
    }
  } );

  py::class_<formula>( m, "Formula" )
      .def( "__str__", []( const formula& f ) { return to_string( f ); } )
      .def( "__repr__", []( const formula& f ) { return "Formula('" + to_string( f ) + "')"; } )
      .def( "__eq__", []( const formula& a, const formula& b ) { return a == b; } )
      .def_property_readonly( "size", &formula::size );

  py::class_<hybrid_automaton>( m, "Automaton" )
      .def_readonly( "name", &hybrid_automaton::name )
      .def_readonly( "variables", &hybrid_automaton::variables )
      .def_readonly( "actions", &hybrid_automaton::actions )
      .def_property_readonly( "locations",
                              []( const hybrid_automaton& h ) {
                                std::vector<std::string> names;
                                for ( const auto& l : h.locations )
                                  names.push_back( l.name );
                                return names;
                              } )
      .def_property_readonly( "edge_count", []( const hybrid_automaton& h ) { return h.edges.size(); } )
      .def_property_readonly( "acceptance_sets", []( const hybrid_automaton& h ) { return h.acceptance.size(); } )
      .def( "__str__", []( const hybrid_automaton& h ) { return print_model( h ); } );

  m.def( "parse_model", &parse_model, py::arg( "text" ) );
  m.def( "load_model", &load_model, py::arg( "path" ) );
  m.def( "compose", &compose, py::arg( "a" ), py::arg( "b" ) );
  m.def( "isomorphic", &isomorphic, py::arg( "a" ), py::arg( "b" ) );

  m.def(
      "parse_formula",
      []( const std::string& text, std::vector<std::string> variables, std::vector<std::string> actions ) {
        return parse_formula( text, make_decl( std::move( variables ), std::move( actions ) ) );
      },
      py::arg( "text" ), py::arg( "variables" ) = std::vector<std::string>{},
      py::arg( "actions" ) = std::vector<std::string>{} );
  m.def(
      "to_nnf", []( const formula& f ) { return to_nnf( f, {} ); }, py::arg( "formula" ) );

  m.def(
      "translate",
      []( const formula& f, std::vector<std::string> variables, std::vector<std::string> actions, bool prune ) {
        auto decl = make_decl( variables, actions );
        auto fa = build_formula_automaton( to_nnf( f, decl ), variables, actions, decl );
        return prune ? prune_unreachable( fa.automaton ) : fa.automaton;
      },
      py::arg( "formula" ), py::arg( "variables" ), py::arg( "actions" ), py::arg( "prune" ) = false );

  m.def(
      "check",
      []( const hybrid_automaton& system, const std::string& property, double horizon, double step, double eps,
          const std::string& witness, bool strict ) {
        check_options opt;
        opt.reach.horizon = horizon;
        opt.reach.step = step;
        opt.eps = eps;
        opt.witness_all = witness == "all";
        if ( !opt.witness_all )
          opt.witness = witness;
        opt.strict = strict;
        const formula phi = parse_formula( property, system.decl() );
        verdict v;
        {
          py::gil_scoped_release release;
          v = check( phi, system, opt );
        }
        return verdict_dict( v );
      },
      py::arg( "system" ), py::arg( "formula" ), py::arg( "horizon" ) = 100.0, py::arg( "step" ) = 0.01,
      py::arg( "eps" ) = 1e-6, py::arg( "witness" ) = "", py::arg( "strict" ) = false );

  m.def(
      "export_phaver", []( const hybrid_automaton& h ) { return export_phaver( h ); }, py::arg( "automaton" ) );
  m.def( "import_phaver", &import_phaver, py::arg( "text" ) );

  m.def(
      "monitor",
      []( const std::string& csv, const std::string& events, const std::string& property,
          const hybrid_automaton& system, std::size_t position ) {
        return eval( read_trace( csv, events ), parse_formula( property, system.decl() ), position );
      },
      py::arg( "trace_csv" ), py::arg( "events" ), py::arg( "formula" ), py::arg( "system" ),
      py::arg( "position" ) = 1 );

  m.def(
      "simulate",
      []( const hybrid_automaton& h, std::uint64_t seed, std::map<std::string, std::pair<double, double>> initial ) {
        random_trace_options ro;
        for ( const auto& [ v, b ] : initial )
          ro.initial[ v ] = { b.first, b.second };
        const auto t = random_trace( h, seed, ro );
        return py::make_tuple( write_trace_csv( t.trace ), write_trace_events( t.trace ) );
      },
      py::arg( "system" ), py::arg( "seed" ) = 0,
      py::arg( "initial" ) = std::map<std::string, std::pair<double, double>>{} );
}
