#include "hyltl/phaver.hpp"

#include "hyltl/error.hpp"

#include "syntax.hpp"

#include <regex>
#include <sstream>

namespace hyltl
{

namespace
{

std::string safe( const std::string& name )
{
  std::string out;
  for ( char c : name )
    out += c == '.' ? std::string( "__" ) : std::string( 1, c );
  return out;
}

std::string unsafe( const std::string& name )
{
  std::string out;
  for ( std::size_t i = 0; i < name.size(); ++i )
    if ( name.compare( i, 2, "__" ) == 0 )
    {
      out += '.';
      ++i;
    }
    else
      out += name[ i ];
  return out;
}

std::string render( const expr& e )
{
  // PhaVer writes both derivatives and post-values as x'
  return to_string( e.substitute( []( const var_ref& v ) -> std::optional<expr> {
    const std::string n = safe( v.name );
    return expr::variable( v.kind == var_kind::plain ? n : n + "'" );
  } ) );
}

std::string render( const constraint& c )
{
  if ( !linearize( c ) )
    throw error( "nonlinear_export", "nonlinear export unsupported: " + to_string( c ) );
  const std::string rel = c.rel == relation::eq ? "==" : to_string( c.rel );
  return render( c.lhs ) + " " + rel + " " + render( c.rhs );
}

std::string conjunction( const std::vector<constraint>& cs )
{
  if ( cs.empty() )
    return "true";
  std::string out;
  for ( const auto& c : cs )
    out += ( out.empty() ? "" : " & " ) + render( c );
  return out;
}

std::string join( const std::vector<std::string>& names )
{
  std::string out;
  for ( const auto& n : names )
    out += ( out.empty() ? "" : ", " ) + safe( n );
  return out;
}

void write_automaton( std::ostringstream& os, const hybrid_automaton& h )
{
  os << "// generated by hyltl-mc\n";
  for ( const auto& set : h.acceptance )
  {
    os << "// final {";
    for ( std::size_t i = 0; i < set.size(); ++i )
      os << ( i ? ", " : " " ) << safe( h.locations[ set[ i ] ].name );
    os << " }\n";
  }
  os << "automaton " << safe( h.name ) << "\n";
  os << "  state_var: " << join( h.variables ) << ";\n";
  os << "  synclabs: " << join( h.actions ) << ";\n";
  for ( std::size_t l = 0; l < h.locations.size(); ++l )
  {
    const auto& loc = h.locations[ l ];
    std::vector<constraint> invariant, dynamics;
    for ( const auto& c : loc.flow )
      ( mentions( c, var_kind::dotted ) ? dynamics : invariant ).push_back( c );
    os << "  loc " << safe( loc.name ) << ": while " << conjunction( invariant ) << " wait { "
       << conjunction( dynamics ) << " };\n";
    for ( const auto& e : h.edges )
    {
      if ( e.source != l )
        continue;
      std::vector<constraint> guard, reset;
      for ( const auto& c : e.jump )
        ( mentions( c, var_kind::primed ) ? reset : guard ).push_back( c );
      os << "    when " << conjunction( guard ) << " sync " << safe( e.action ) << " do { " << conjunction( reset )
         << " } goto " << safe( h.locations[ e.target ].name ) << ";\n";
    }
  }
  os << "  initially: ";
  for ( std::size_t i = 0; i < h.initial.size(); ++i )
  {
    const auto& loc = h.locations[ h.initial[ i ] ];
    os << ( i ? ", " : "" ) << safe( loc.name );
    if ( !loc.init.empty() )
      os << " & " << conjunction( loc.init );
  }
  os << ";\nend\n";
}

} // namespace

std::string export_phaver( const hybrid_automaton& h )
{
  std::ostringstream os;
  write_automaton( os, h );
  os << "\nreg = " << safe( h.name ) << ".reachable;\n";
  os << "reg.print(\"" << safe( h.name ) << "_reach\", 0);\n";
  return os.str();
}

std::string export_phaver( const instrumented_automaton& inst )
{
  const auto& h = inst.automaton;
  std::ostringstream os;
  write_automaton( os, h );
  const std::string name = safe( h.name );
  os << "\nreg = " << name << ".reachable;\n";
  os << "query = " << name << ".{";
  bool first = true;
  for ( const auto& t : inst.query.targets )
  {
    os << ( first ? "" : ",\n  " ) << safe( h.locations[ t.loc ].name ) << " & "
       << safe( h.variables[ inst.query.flag ] ) << " == " << to_string( expr::constant( t.code ) );
    for ( const auto& [ y, x ] : inst.query.pairs )
    {
      const std::string d = safe( h.variables[ y ] ) + " - " + safe( h.variables[ x ] );
      const std::string eps = to_string( expr::constant( inst.query.eps ) );
      os << " & " << d << " >= -" << eps << " & " << d << " <= " << eps;
    }
    first = false;
  }
  os << "};\n";
  os << "reg.intersection_assign(query);\n";
  os << "reg.print(\"" << name << "_hits\", 0);\n";
  return os.str();
}

namespace
{

using namespace syntax;

std::vector<constraint> read_conjunction( token_stream& ts, const expr_context& ctx )
{
  std::vector<constraint> out;
  if ( ts.accept_ident( "true" ) )
    return out;
  do
    out.push_back( parse_constraint( ts, ctx ) );
  while ( ts.accept( tok::amp ) );
  return out;
}

std::vector<std::string> read_names( token_stream& ts, std::string_view what )
{
  std::vector<std::string> out;
  if ( ts.at( tok::semicolon ) )
    return out;
  do
    out.push_back( unsafe( ts.expect_name( what ) ) );
  while ( ts.accept( tok::comma ) );
  return out;
}

struct pending_edge
{
  std::size_t source;
  std::string action;
  std::vector<constraint> jump;
  std::string target;
  token at;
};

} // namespace

hybrid_automaton import_phaver( const std::string& text )
{
  // the query script after the block uses syntax we do not read
  static const std::regex block_end( R"((^|\n)[ \t]*end[ \t]*(\r?\n|$))" );
  std::smatch m;
  const std::string block = std::regex_search( text, m, block_end ) ? text.substr( 0, m.position( 0 ) + m.length( 0 ) ) : text;
  token_stream ts( tokenize( block ) );
  hybrid_automaton h;
  ts.expect_ident( "automaton" );
  h.name = unsafe( ts.expect_name( "automaton name" ) );

  expr_context plain, flow, jump;
  plain.is_variable = [ &h ]( const std::string& n ) { return h.decl().is_variable( n ); };
  plain.allow_dotted = false;
  flow = plain;
  flow.prime_means_dot = true;
  jump = plain;
  jump.allow_primed = true;

  std::vector<pending_edge> edges;
  std::vector<std::pair<std::string, std::vector<constraint>>> initially;
  while ( !ts.accept_ident( "end" ) )
  {
    if ( ts.accept_ident( "state_var" ) )
    {
      ts.expect( tok::colon, "':'" );
      h.variables = read_names( ts, "variable name" );
      ts.expect( tok::semicolon, "';'" );
    }
    else if ( ts.accept_ident( "synclabs" ) )
    {
      ts.expect( tok::colon, "':'" );
      h.actions = read_names( ts, "label" );
      ts.expect( tok::semicolon, "';'" );
    }
    else if ( ts.accept_ident( "loc" ) )
    {
      location loc;
      loc.name = unsafe( ts.expect_name( "location name" ) );
      ts.expect( tok::colon, "':'" );
      ts.expect_ident( "while" );
      loc.flow = read_conjunction( ts, plain );
      ts.expect_ident( "wait" );
      ts.expect( tok::lbrace, "'{'" );
      for ( auto& c : read_conjunction( ts, flow ) )
        loc.flow.push_back( std::move( c ) );
      ts.expect( tok::rbrace, "'}'" );
      ts.expect( tok::semicolon, "';'" );
      h.locations.push_back( std::move( loc ) );
      while ( ts.at_ident( "when" ) )
      {
        pending_edge e;
        e.at = ts.next();
        e.source = h.locations.size() - 1;
        e.jump = read_conjunction( ts, plain );
        ts.expect_ident( "sync" );
        e.action = unsafe( ts.expect_name( "label" ) );
        if ( ts.accept_ident( "do" ) )
        {
          ts.expect( tok::lbrace, "'{'" );
          for ( auto& c : read_conjunction( ts, jump ) )
            e.jump.push_back( std::move( c ) );
          ts.expect( tok::rbrace, "'}'" );
        }
        ts.expect_ident( "goto" );
        e.target = unsafe( ts.expect_name( "location name" ) );
        ts.expect( tok::semicolon, "';'" );
        edges.push_back( std::move( e ) );
      }
    }
    else if ( ts.accept_ident( "initially" ) )
    {
      ts.expect( tok::colon, "':'" );
      do
      {
        std::string name = unsafe( ts.expect_name( "location name" ) );
        std::vector<constraint> cs;
        if ( ts.accept( tok::amp ) )
          cs = read_conjunction( ts, plain );
        initially.emplace_back( std::move( name ), std::move( cs ) );
      } while ( ts.accept( tok::comma ) );
      ts.expect( tok::semicolon, "';'" );
    }
    else
      ts.fail( "unexpected " + describe( ts.peek() ) + " in automaton" );
  }

  for ( auto& e : edges )
  {
    const auto target = h.find_location( e.target );
    if ( !target )
      ts.fail_at( e.at, "unknown location '" + e.target + "'" );
    h.edges.push_back( edge{ e.source, *target, e.action, std::move( e.jump ) } );
  }
  for ( auto& [ name, cs ] : initially )
  {
    const auto l = h.find_location( name );
    if ( !l )
      throw error( "unknown_location", "unknown initial location '" + name + "'" );
    h.initial.push_back( *l );
    h.locations[ *l ].init = std::move( cs );
  }
  h.validate();
  return h;
}

} // namespace hyltl
