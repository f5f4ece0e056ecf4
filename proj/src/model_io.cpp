#include "hyltl/model_io.hpp"

#include "hyltl/error.hpp"
#include "syntax.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace hyltl
{

using namespace syntax;

namespace
{

class model_parser
{
public:
  explicit model_parser( const std::string& text ) : ts_( tokenize( text ) )
  {
    ctx_.is_variable = [ this ]( const std::string& n ) { return h_.decl().is_variable( n ); };
  }

  hybrid_automaton run()
  {
    if ( ts_.accept_ident( "automaton" ) )
    {
      h_.name = ts_.expect_name( "automaton name" );
      ts_.accept( tok::semicolon );
    }
    while ( !ts_.at( tok::end ) )
    {
      const token& t = ts_.peek();
      if ( t.kind != tok::ident )
        ts_.fail( "expected a declaration, found " + describe( t ) );
      if ( t.text == "vars" )
        names( h_.variables, "variable" );
      else if ( t.text == "actions" )
        names( h_.actions, "action" );
      else if ( t.text == "constraint" )
        named();
      else if ( t.text == "loc" )
        loc();
      else if ( t.text == "edge" )
        edge_decl();
      else if ( t.text == "initial" )
        initial();
      else if ( t.text == "final" )
        final_set();
      else
        ts_.fail( "unknown declaration '" + t.text + "'" );
    }
    for ( const auto& [ tok_, name ] : pending_initial_ )
      h_.initial.push_back( resolve( tok_, name ) );
    for ( const auto& [ tok_, from, action, to, jump ] : pending_edges_ )
      h_.edges.push_back( hyltl::edge{ resolve( tok_, from ), resolve( tok_, to ), action, jump } );
    for ( const auto& set : pending_final_ )
    {
      std::vector<std::size_t> f;
      for ( const auto& [ tok_, name ] : set )
        f.push_back( resolve( tok_, name ) );
      h_.acceptance.push_back( std::move( f ) );
    }
    h_.validate();
    return std::move( h_ );
  }

private:
  std::size_t resolve( const token& at, const std::string& name )
  {
    if ( auto i = h_.find_location( name ) )
      return *i;
    ts_.fail_at( at, "unknown location '" + name + "'" );
  }

  void names( std::vector<std::string>& into, const std::string& what )
  {
    ts_.next();
    if ( ts_.accept( tok::semicolon ) )
      return;
    do
    {
      const token t = ts_.expect( tok::ident, what + " name" );
      if ( std::find( into.begin(), into.end(), t.text ) != into.end() )
        ts_.fail_at( t, "duplicate " + what + " '" + t.text + "'" );
      if ( t.text == "X" || t.text == "U" || t.text == "R" || t.text == "F" || t.text == "G" || t.text == "der" ||
           t.text == "true" || t.text == "false" )
        ts_.fail_at( t, "'" + t.text + "' is reserved" );
      into.push_back( t.text );
    } while ( ts_.accept( tok::comma ) );
    ts_.expect( tok::semicolon, "';'" );
  }

  void named()
  {
    ts_.next();
    const token t = ts_.expect( tok::ident, "constraint name" );
    if ( h_.decl().find_constraint( t.text ) || h_.decl().is_variable( t.text ) || h_.decl().is_action( t.text ) )
      ts_.fail_at( t, "name '" + t.text + "' already declared" );
    ts_.expect( tok::colon, "':'" );
    named_constraint nc{ t.text, flow_constraint(), std::nullopt };
    if ( ts_.accept_ident( "complement" ) )
      nc.complement = flow_constraint();
    ts_.expect( tok::semicolon, "';'" );
    h_.constraints.push_back( std::move( nc ) );
  }

  constraint flow_constraint()
  {
    expr_context ctx = ctx_;
    ctx.allow_dotted = true;
    ctx.allow_primed = false;
    return parse_constraint( ts_, ctx );
  }

  std::vector<constraint> list( bool dotted, bool primed, tok stop )
  {
    expr_context ctx = ctx_;
    ctx.allow_dotted = dotted;
    ctx.allow_primed = primed;
    std::vector<constraint> out;
    if ( ts_.at( stop ) )
      return out;
    do
    {
      if ( ts_.at( stop ) )
        break;
      out.push_back( parse_constraint( ts_, ctx ) );
    } while ( ts_.accept( tok::comma ) );
    return out;
  }

  void loc()
  {
    ts_.next();
    const token t = ts_.expect( tok::ident, "location name" );
    if ( h_.find_location( t.text ) )
      ts_.fail_at( t, "duplicate location '" + t.text + "'" );
    location l;
    l.name = t.text;
    ts_.expect( tok::lbrace, "'{'" );
    while ( !ts_.accept( tok::rbrace ) )
    {
      if ( ts_.accept_ident( "flow" ) )
      {
        ts_.expect( tok::colon, "':'" );
        auto cs = list( true, false, tok::semicolon );
        l.flow.insert( l.flow.end(), cs.begin(), cs.end() );
      }
      else if ( ts_.accept_ident( "init" ) )
      {
        ts_.expect( tok::colon, "':'" );
        auto cs = list( false, false, tok::semicolon );
        l.init.insert( l.init.end(), cs.begin(), cs.end() );
      }
      else
        ts_.fail( "expected 'flow:' or 'init:', found " + describe( ts_.peek() ) );
      ts_.expect( tok::semicolon, "';'" );
    }
    h_.locations.push_back( std::move( l ) );
  }

  void edge_decl()
  {
    ts_.next();
    const token from = ts_.expect( tok::ident, "source location" );
    ts_.expect( tok::minus, "'-'" );
    const token act = ts_.expect( tok::ident, "action" );
    if ( !h_.decl().is_action( act.text ) )
      ts_.fail_at( act, "unknown action '" + act.text + "'" );
    ts_.expect( tok::arrow, "'->'" );
    const token to = ts_.expect( tok::ident, "target location" );
    std::vector<constraint> jump;
    if ( ts_.accept( tok::lbrace ) )
    {
      jump = list( false, true, tok::rbrace );
      ts_.accept( tok::semicolon );
      ts_.expect( tok::rbrace, "'}'" );
    }
    else
      ts_.expect( tok::semicolon, "';' or '{'" );
    pending_edges_.push_back( { from, from.text, act.text, to.text, std::move( jump ) } );
  }

  void initial()
  {
    ts_.next();
    if ( ts_.accept( tok::semicolon ) )
      return;
    do
    {
      const token t = ts_.expect( tok::ident, "location name" );
      pending_initial_.emplace_back( t, t.text );
    } while ( ts_.accept( tok::comma ) );
    ts_.expect( tok::semicolon, "';'" );
  }

  void final_set()
  {
    ts_.next();
    ts_.expect( tok::lbrace, "'{'" );
    std::vector<std::pair<token, std::string>> set;
    if ( !ts_.at( tok::rbrace ) )
      do
      {
        const token t = ts_.expect( tok::ident, "location name" );
        set.emplace_back( t, t.text );
      } while ( ts_.accept( tok::comma ) );
    ts_.expect( tok::rbrace, "'}'" );
    ts_.accept( tok::semicolon );
    pending_final_.push_back( std::move( set ) );
  }

  struct pending_edge
  {
    token at;
    std::string from, action, to;
    std::vector<constraint> jump;
  };

  token_stream ts_;
  expr_context ctx_;
  hybrid_automaton h_;
  std::vector<std::pair<token, std::string>> pending_initial_;
  std::vector<pending_edge> pending_edges_;
  std::vector<std::vector<std::pair<token, std::string>>> pending_final_;
};

std::string join( const std::vector<constraint>& cs )
{
  std::string out;
  for ( std::size_t i = 0; i < cs.size(); ++i )
    out += ( i ? ", " : "" ) + to_string( cs[ i ] );
  return out;
}

std::string join( const std::vector<std::string>& xs )
{
  std::string out;
  for ( std::size_t i = 0; i < xs.size(); ++i )
    out += ( i ? ", " : "" ) + xs[ i ];
  return out;
}

} // namespace

hybrid_automaton parse_model( const std::string& text )
{
  return model_parser( text ).run();
}

std::string read_file( const std::string& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw error( "io_error", "cannot read '" + path + "'" );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file( const std::string& path, const std::string& text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out || !( out << text ) )
    throw error( "io_error", "cannot write '" + path + "'" );
}

hybrid_automaton load_model( const std::string& path )
{
  return parse_model( read_file( path ) );
}

std::string print_model( const hybrid_automaton& h )
{
  std::ostringstream out;
  out << "automaton " << h.name << "\n";
  out << "vars " << join( h.variables ) << ";\n";
  out << "actions " << join( h.actions ) << ";\n";
  for ( const auto& c : h.constraints )
  {
    out << "constraint " << c.name << ": " << to_string( c.condition );
    if ( c.complement )
      out << " complement " << to_string( *c.complement );
    out << ";\n";
  }
  for ( const auto& l : h.locations )
  {
    out << "\n";
    if ( !l.comment.empty() )
    {
      std::istringstream lines( l.comment );
      for ( std::string line; std::getline( lines, line ); )
        out << "# " << line << "\n";
    }
    out << "loc " << l.name << " {\n";
    out << "  flow: " << join( l.flow ) << ";\n";
    if ( !l.init.empty() )
      out << "  init: " << join( l.init ) << ";\n";
    out << "}\n";
  }
  if ( !h.edges.empty() )
    out << "\n";
  for ( const auto& e : h.edges )
  {
    out << "edge " << h.locations[ e.source ].name << " -" << e.action << "-> " << h.locations[ e.target ].name;
    if ( e.jump.empty() )
      out << ";\n";
    else
      out << " { " << join( e.jump ) << " }\n";
  }
  out << "\n";
  std::vector<std::string> init;
  for ( auto i : h.initial )
    init.push_back( h.locations[ i ].name );
  out << "initial " << join( init ) << ";\n";
  for ( const auto& f : h.acceptance )
  {
    std::vector<std::string> names;
    for ( auto i : f )
      names.push_back( h.locations[ i ].name );
    out << "final { " << join( names ) << " }\n";
  }
  return out.str();
}

} // namespace hyltl
