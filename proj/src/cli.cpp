#include "hyltl/cli.hpp"

#include "hyltl/error.hpp"
#include "hyltl/model_io.hpp"
#include "hyltl/monitor.hpp"
#include "hyltl/phaver.hpp"
#include "hyltl/product.hpp"
#include "hyltl/tableau.hpp"
#include "hyltl/trace_io.hpp"

#include "syntax.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace hyltl
{

namespace
{

using json = nlohmann::json;

constexpr const char* thermostat_model = R"(automaton thermostat
vars x;
actions on, off;
loc idle { flow: der(x) = -0.2 * x, x >= 17; }
loc heat { flow: der(x) = 30 - 0.2 * x, x <= 23; }
edge idle -on-> heat { x <= 19, x' = x }
edge heat -off-> idle { x >= 21, x' = x }
initial idle;
)";

constexpr const char* phi_hyb = "!F(x >= 21 & X on)";
constexpr const char* phi_safe = "G(x >= 15 & x <= 25)";
constexpr const char* phi_react = "G(on -> F off)";

/// Without a model, identifiers next to arithmetic or relations are
/// variables and the remaining ones actions.
declarations infer_declarations( const std::string& text )
{
  static const std::set<std::string> keywords{ "X", "U", "R", "F", "G", "true", "false", "sin", "cos", "exp", "der" };
  using syntax::tok;
  const auto tokens = syntax::tokenize( text );
  auto arithmetic = [ & ]( tok k ) {
    return syntax::is_relation( k ) || k == tok::plus || k == tok::minus || k == tok::star || k == tok::slash;
  };
  std::set<std::string> vars, acts;
  for ( std::size_t i = 0; i < tokens.size(); ++i )
  {
    const auto& t = tokens[ i ];
    if ( t.kind != tok::ident || keywords.count( t.text ) )
      continue;
    const bool after = i > 0 && arithmetic( tokens[ i - 1 ].kind );
    const bool before = i + 1 < tokens.size() && arithmetic( tokens[ i + 1 ].kind );
    const bool in_der = i >= 2 && tokens[ i - 2 ].kind == tok::ident && tokens[ i - 2 ].text == "der";
    ( after || before || in_der ? vars : acts ).insert( t.text );
  }
  declarations d;
  d.variables.assign( vars.begin(), vars.end() );
  for ( const auto& a : acts )
    if ( !vars.count( a ) )
      d.actions.push_back( a );
  return d;
}

std::vector<std::string> split_list( const std::string& s )
{
  std::vector<std::string> out;
  std::string item;
  std::istringstream is( s );
  while ( std::getline( is, item, ',' ) )
    if ( !item.empty() )
      out.push_back( item );
  return out;
}

std::string formula_text( const std::string& inline_text, const std::string& path )
{
  if ( !path.empty() )
    return read_file( path );
  if ( inline_text.empty() )
    throw error( "missing_formula", "give the property with --formula or --formula-file" );
  return inline_text;
}

std::string format_interval( const interval& i )
{
  std::ostringstream os;
  os << std::setprecision( 6 ) << '[' << i.lo << ", " << i.hi << ']';
  return os.str();
}

json interval_json( const interval& i )
{
  auto num = []( double v ) -> json { return std::isfinite( v ) ? json( v ) : json( v > 0 ? "inf" : "-inf" ); };
  return json::array( { num( i.lo ), num( i.hi ) } );
}

struct check_config
{
  std::string model;
  std::string formula;
  std::string formula_file;
  std::string witness;
  std::string export_path;
  std::string regions_path;
  bool strict = false;
  bool no_prune = false;
  bool machine = false;
  check_options options;
};

int cmd_check( const check_config& cfg, std::ostream& out )
{
  const auto system = load_model( cfg.model );
  const auto phi = parse_formula( formula_text( cfg.formula, cfg.formula_file ), system.decl() );
  check_options opt = cfg.options;
  opt.strict = cfg.strict;
  opt.prune = !cfg.no_prune;
  if ( cfg.witness == "all" )
    opt.witness_all = true;
  else
    opt.witness = cfg.witness;

  if ( !cfg.export_path.empty() )
  {
    auto product = negate_and_build( phi, system, opt );
    if ( opt.prune )
      product = prune_unreachable( product );
    write_file( cfg.export_path, export_phaver( instrument( degeneralize( product ), opt ) ) );
  }
  if ( !cfg.regions_path.empty() )
  {
    auto product = negate_and_build( phi, system, opt );
    if ( opt.prune )
      product = prune_unreachable( product );
    write_file( cfg.regions_path, reachable( instrument( degeneralize( product ), opt ).automaton, opt.reach ).to_csv() );
  }

  const verdict v = check( phi, system, opt );
  if ( cfg.machine )
  {
    json j;
    j[ "verdict" ] = to_string( v.result );
    j[ "reason" ] = v.reason;
    j[ "formula" ] = to_string( phi );
    j[ "product_locations" ] = v.product_locations;
    j[ "pruned_locations" ] = v.pruned_locations;
    j[ "instrumented_locations" ] = v.instrumented_locations;
    j[ "reached_boxes" ] = v.reached_boxes;
    j[ "phases" ] = v.phases;
    j[ "horizon" ] = v.horizon;
    j[ "step" ] = v.step;
    j[ "horizon_bounded" ] = v.horizon_bounded;
    j[ "seconds" ] = v.seconds;
    j[ "warnings" ] = v.warnings;
    j[ "hits" ] = json::array();
    for ( std::size_t k = 0; k < v.hits.size(); ++k )
    {
      json box;
      for ( std::size_t i = 0; i < v.variables.size(); ++i )
        box[ v.variables[ i ] ] = interval_json( v.hits[ k ].region[ i ] );
      j[ "hits" ].push_back( { { "location", v.hit_locations[ k ] }, { "box", box } } );
    }
    out << j.dump( 2 ) << '\n';
  }
  else
  {
    out << "verdict: " << to_string( v.result ) << '\n';
    out << "reason: " << v.reason << '\n';
    out << "property: " << to_string( phi ) << '\n';
    out << "product locations: " << v.product_locations << " (" << v.pruned_locations << " after pruning, "
        << v.instrumented_locations << " instrumented)\n";
    out << "reached boxes: " << v.reached_boxes << " in " << v.phases << " phases (step " << v.step << ", horizon "
        << v.horizon << ( v.horizon_bounded ? ", some phases cut at the horizon" : "" ) << ")\n";
    out << "time: " << std::fixed << std::setprecision( 3 ) << v.seconds << " s\n" << std::defaultfloat;
    for ( const auto& w : v.warnings )
      out << "warning: " << w << '\n';
    const std::size_t shown = std::min<std::size_t>( v.hits.size(), 20 );
    for ( std::size_t k = 0; k < shown; ++k )
    {
      out << "hit " << v.hit_locations[ k ] << ':';
      for ( std::size_t i = 0; i < v.variables.size(); ++i )
        out << ' ' << v.variables[ i ] << " in " << format_interval( v.hits[ k ].region[ i ] );
      out << '\n';
    }
    if ( v.hits.size() > shown )
      out << "... " << v.hits.size() - shown << " more hits\n";
  }
  return v.result == outcome::verified ? 0 : 2;
}

int cmd_translate( const std::string& text, const std::string& model, const std::string& vars,
                   const std::string& actions, bool strict, bool prune, const std::string& output, std::ostream& out )
{
  declarations decl;
  if ( !model.empty() )
    decl = load_model( model ).decl();
  else
  {
    decl = infer_declarations( text );
    if ( !vars.empty() )
      decl.variables = split_list( vars );
    if ( !actions.empty() )
      decl.actions = split_list( actions );
  }
  const auto phi = to_nnf( parse_formula( text, decl ), decl, nnf_options{ strict } );
  auto fa = build_formula_automaton( phi, decl.variables, decl.actions, decl, tableau_options{ strict } );
  if ( prune )
    fa = prune_unreachable( fa );
  fa.automaton.name = "formula";
  const std::string printed = print_model( fa.automaton );
  if ( output.empty() )
    out << printed;
  else
    write_file( output, printed );
  return 0;
}

int cmd_monitor( const std::string& csv, const std::string& events, const std::string& text,
                 const std::string& model, std::size_t position, double tol, bool machine, std::ostream& out )
{
  const auto trace = read_trace( read_file( csv ), read_file( events ) );
  declarations decl;
  if ( !model.empty() )
    decl = load_model( model ).decl();
  else
  {
    decl = infer_declarations( text );
    std::set<std::string> acts( decl.actions.begin(), decl.actions.end() );
    for ( std::size_t i = 0; i < trace.length(); ++i )
      acts.insert( trace.at( i ).action );
    decl.actions.assign( acts.begin(), acts.end() );
    decl.variables.clear();
    for ( const auto& [ v, _ ] : trace.at( 0 ).trajectory.fstate() )
      decl.variables.push_back( v );
  }
  const auto phi = parse_formula( text, decl );
  const bool result = eval( trace, phi, position, tol );
  if ( machine )
    out << json{ { "formula", to_string( phi ) }, { "position", position }, { "value", result } }.dump( 2 ) << '\n';
  else
    out << ( result ? "true" : "false" ) << '\n';
  return 0;
}

int cmd_selftest( const check_options& base, std::ostream& out )
{
  const auto thermostat = parse_model( thermostat_model );
  std::string init_text = thermostat_model;
  init_text.replace( init_text.find( "x >= 17; }" ), 10, "x >= 17; init: x >= 19, x <= 21; }" );
  const auto with_init = parse_model( init_text );
  std::string relaxed_text = thermostat_model;
  relaxed_text.replace( relaxed_text.find( "x <= 19," ), 8, "x <= 25," );
  const auto relaxed = parse_model( relaxed_text );

  int failures = 0;
  auto report = [ & ]( const std::string& name, bool ok ) {
    out << ( ok ? "PASS " : "FAIL " ) << name << '\n';
    failures += ok ? 0 : 1;
  };
  auto verdict_of = [ & ]( const hybrid_automaton& h, const char* text ) {
    return check( parse_formula( text, h.decl() ), h, base );
  };
  report( "thermostat satisfies !F(x >= 21 & X on)", verdict_of( thermostat, phi_hyb ).result == outcome::verified );
  report( "thermostat from [19, 21] stays within [15, 25]",
          verdict_of( with_init, phi_safe ).result == outcome::verified );
  report( "relaxed guard is not verified", verdict_of( relaxed, phi_hyb ).result == outcome::inconclusive );
  random_trace_options ro;
  ro.initial[ "x" ] = { 19.0, 21.0 };
  bool react = true;
  for ( std::uint64_t seed = 0; seed < 20; ++seed )
  {
    const auto t = random_trace( with_init, seed, ro );
    react = react && eval( t.trace, parse_formula( phi_react, with_init.decl() ) );
  }
  report( "simulated runs satisfy G(on -> F off)", react );
  return failures == 0 ? 0 : 1;
}

void report_error( const error& e, std::ostream& err, const std::string& context = {} )
{
  err << "ERROR code=" << e.code();
  if ( const auto* pe = dynamic_cast<const parse_error*>( &e ) )
    err << " pos=" << pe->position().line << ':' << pe->position().column;
  err << '\n' << ( context.empty() ? "" : context + ": " ) << e.what() << '\n';
}

} // namespace

int run_cli( int argc, const char* const* argv, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Model checker for HyLTL properties of hybrid automata", "hyltl-mc" };
  app.set_config( "--config", "", "Read options from a TOML or INI file" );
  app.require_subcommand( 1 );

  double tol = default_tolerance;
  app.add_option( "--tolerance", tol, "Absolute tolerance for sampled constraint checks" )
      ->envname( "HYLTL_TOLERANCE" )
      ->check( CLI::PositiveNumber );

  check_config cc;
  auto* check_cmd = app.add_subcommand( "check", "Check a property against a model" );
  check_cmd->add_option( "--model", cc.model, "Model file" )->required()->check( CLI::ExistingFile );
  check_cmd->add_option( "--formula", cc.formula, "Property text" );
  check_cmd->add_option( "--formula-file", cc.formula_file, "File holding the property" )->check( CLI::ExistingFile );
  check_cmd->add_option( "--horizon", cc.options.reach.horizon, "Time bound per continuous phase" )
      ->check( CLI::PositiveNumber )
      ->capture_default_str();
  check_cmd->add_option( "--step", cc.options.reach.step, "Integration step" )
      ->check( CLI::PositiveNumber )
      ->capture_default_str();
  check_cmd->add_option( "--eps", cc.options.eps, "Tolerance of the y = x test" )
      ->envname( "HYLTL_EPS" )
      ->check( CLI::PositiveNumber )
      ->capture_default_str();
  check_cmd->add_option( "--max-phases", cc.options.reach.max_phases, "Cap on explored continuous phases" )
      ->capture_default_str();
  check_cmd->add_option( "--witness", cc.witness, "Variable stored by the guess, or 'all'" );
  check_cmd->add_option( "--export-phaver", cc.export_path, "Also write the instrumented product for PhaVer" );
  check_cmd->add_option( "--dump-regions", cc.regions_path, "Write the reached boxes as CSV" );
  check_cmd->add_flag( "--strict-negation", cc.strict, "Reject negated constraints without complement" );
  check_cmd->add_flag( "--no-prune", cc.no_prune, "Keep locations without accepting continuation" );
  check_cmd->add_flag( "--machine", cc.machine, "Print the verdict as JSON" );

  std::string t_formula, t_model, t_vars, t_actions, t_output;
  bool t_strict = false, t_prune = false;
  auto* translate_cmd = app.add_subcommand( "translate", "Print the automaton of a formula" );
  translate_cmd->add_option( "--formula", t_formula, "Formula text" )->required();
  translate_cmd->add_option( "--model", t_model, "Take declarations from a model" )->check( CLI::ExistingFile );
  translate_cmd->add_option( "--vars", t_vars, "Comma-separated variables" );
  translate_cmd->add_option( "--actions", t_actions, "Comma-separated actions" );
  translate_cmd->add_option( "--output,-o", t_output, "Output file" );
  translate_cmd->add_flag( "--strict-negation", t_strict, "Reject negated constraints without complement" );
  translate_cmd->add_flag( "--prune", t_prune, "Drop locations without accepting continuation" );

  std::vector<std::string> c_models;
  std::string c_output;
  auto* compose_cmd = app.add_subcommand( "compose", "Parallel composition of two models" );
  compose_cmd->add_option( "models", c_models, "Two model files" )->required()->expected( 2 )->check(
      CLI::ExistingFile );
  compose_cmd->add_option( "--output,-o", c_output, "Output file" );

  std::string e_model, e_formula, e_output, e_witness;
  auto* export_cmd = app.add_subcommand( "export", "Write a model, or an instrumented product, for PhaVer" );
  export_cmd->add_option( "model", e_model, "Model file" )->required()->check( CLI::ExistingFile );
  export_cmd->add_option( "--formula", e_formula, "Export the instrumented product for this property" );
  export_cmd->add_option( "--witness", e_witness, "Variable stored by the guess, or 'all'" );
  export_cmd->add_option( "--output,-o", e_output, "Output file" );

  std::string m_csv, m_events, m_formula, m_model;
  std::size_t m_position = 1;
  bool m_machine = false;
  auto* monitor_cmd = app.add_subcommand( "monitor", "Evaluate a formula on a recorded lasso trace" );
  monitor_cmd->add_option( "--trace", m_csv, "Samples CSV" )->required()->check( CLI::ExistingFile );
  monitor_cmd->add_option( "--events", m_events, "Action log" )->required()->check( CLI::ExistingFile );
  monitor_cmd->add_option( "--formula", m_formula, "Formula text" )->required();
  monitor_cmd->add_option( "--model", m_model, "Take declarations from a model" )->check( CLI::ExistingFile );
  monitor_cmd->add_option( "--position", m_position, "1-based position" )->check( CLI::PositiveNumber );
  monitor_cmd->add_flag( "--machine", m_machine, "Print the result as JSON" );

  std::string s_model, s_csv, s_events;
  std::uint64_t s_seed = 0;
  std::vector<std::string> s_init;
  random_trace_options s_options;
  auto* simulate_cmd = app.add_subcommand( "simulate", "Write a random lasso trace of a model" );
  simulate_cmd->add_option( "--model", s_model, "Model file" )->required()->check( CLI::ExistingFile );
  simulate_cmd->add_option( "--seed", s_seed, "Random seed" )->capture_default_str();
  simulate_cmd->add_option( "--trace", s_csv, "Samples CSV to write" )->required();
  simulate_cmd->add_option( "--events", s_events, "Action log to write" )->required();
  simulate_cmd->add_option( "--init", s_init, "Initial bounds as var=lo:hi" );
  simulate_cmd->add_option( "--step", s_options.step, "Sampling step" )->check( CLI::PositiveNumber );
  simulate_cmd->add_option( "--max-prefix", s_options.max_prefix, "Longest prefix" );
  simulate_cmd->add_option( "--max-cycle", s_options.max_cycle, "Longest cycle" );

  check_options st_options;
  auto* selftest_cmd = app.add_subcommand( "selftest", "Run the bundled thermostat checks" );

  // CLI11 drops environment values that fail conversion; reject them here
  for ( const char* name : { "HYLTL_TOLERANCE", "HYLTL_EPS" } )
  {
    const char* value = std::getenv( name );
    if ( value == nullptr )
      continue;
    char* end = nullptr;
    const double v = std::strtod( value, &end );
    if ( end == value || *end != '\0' || !( v > 0 ) )
    {
      report_error( error( "invalid_environment", std::string( name ) + " must be a positive number, got '" + value + "'" ),
                    err );
      return 1;
    }
  }

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    const int code = app.exit( e, out, err );
    return code == 0 ? 0 : 1;
  }

  try
  {
    if ( *check_cmd )
      return cmd_check( cc, out );
    if ( *translate_cmd )
      return cmd_translate( t_formula, t_model, t_vars, t_actions, t_strict, t_prune, t_output, out );
    if ( *compose_cmd )
    {
      auto h = compose( load_model( c_models[ 0 ] ), load_model( c_models[ 1 ] ) );
      if ( c_output.empty() )
        out << print_model( h );
      else
        write_file( c_output, print_model( h ) );
      return 0;
    }
    if ( *export_cmd )
    {
      const auto h = load_model( e_model );
      std::string text;
      if ( e_formula.empty() )
        text = export_phaver( h );
      else
      {
        check_options opt;
        opt.witness_all = e_witness == "all";
        if ( !opt.witness_all )
          opt.witness = e_witness;
        auto product = prune_unreachable( negate_and_build( parse_formula( e_formula, h.decl() ), h, opt ) );
        text = export_phaver( instrument( degeneralize( product ), opt ) );
      }
      if ( e_output.empty() )
        out << text;
      else
        write_file( e_output, text );
      return 0;
    }
    if ( *monitor_cmd )
      return cmd_monitor( m_csv, m_events, m_formula, m_model, m_position, tol, m_machine, out );
    if ( *simulate_cmd )
    {
      const auto h = load_model( s_model );
      for ( const auto& bound : s_init )
      {
        const auto eq = bound.find( '=' );
        const auto colon = bound.find( ':', eq == std::string::npos ? 0 : eq );
        if ( eq == std::string::npos || colon == std::string::npos )
          throw error( "invalid_argument", "--init expects var=lo:hi, got '" + bound + "'" );
        s_options.initial[ bound.substr( 0, eq ) ] = { std::stod( bound.substr( eq + 1, colon - eq - 1 ) ),
                                                      std::stod( bound.substr( colon + 1 ) ) };
      }
      s_options.tol = tol;
      const auto t = random_trace( h, s_seed, s_options );
      write_file( s_csv, write_trace_csv( t.trace ) );
      write_file( s_events, write_trace_events( t.trace ) );
      out << "wrote " << t.trace.prefix.size() << " prefix and " << t.trace.cycle.size() << " cycle segments\n";
      return 0;
    }
    if ( *selftest_cmd )
      return cmd_selftest( st_options, out );
  }
  catch ( const error& e )
  {
    report_error( e, err );
    return 1;
  }
  catch ( const std::exception& e )
  {
    err << "ERROR code=internal\n" << e.what() << '\n';
    return 1;
  }
  return 1;
}

} // namespace hyltl
