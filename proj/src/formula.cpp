#include "hyltl/formula.hpp"

#include "hyltl/error.hpp"

#include <algorithm>
#include <set>

namespace hyltl
{

std::string flow_atom::key() const
{
  return name.empty() ? to_string( condition ) : name;
}

struct formula::node
{
  formula_kind kind;
  std::optional<flow_atom> atom;
  std::string action;
  std::optional<formula> lhs;
  std::optional<formula> rhs;
  std::size_t size = 1;
};

formula formula::top()
{
  static const formula f( std::make_shared<const node>( node{ formula_kind::top, {}, {}, {}, {}, 1 } ) );
  return f;
}

formula formula::bottom()
{
  static const formula f( std::make_shared<const node>( node{ formula_kind::bottom, {}, {}, {}, {}, 1 } ) );
  return f;
}

formula formula::flow( flow_atom atom )
{
  return formula( std::make_shared<const node>( node{ formula_kind::flow_atom, std::move( atom ), {}, {}, {}, 1 } ) );
}

formula formula::action( std::string name )
{
  return formula(
      std::make_shared<const node>( node{ formula_kind::action_atom, {}, std::move( name ), {}, {}, 1 } ) );
}

formula formula::negation( formula f )
{
  const std::size_t sz = f.size() + 1;
  return formula( std::make_shared<const node>( node{ formula_kind::negation, {}, {}, std::move( f ), {}, sz } ) );
}

formula formula::next( formula f )
{
  const std::size_t sz = f.size() + 1;
  return formula( std::make_shared<const node>( node{ formula_kind::next, {}, {}, std::move( f ), {}, sz } ) );
}

#define HYLTL_BINARY( fn, k )                                                                                        \
  formula formula::fn( formula l, formula r )                                                                        \
  {                                                                                                                  \
    const std::size_t sz = l.size() + r.size() + 1;                                                                  \
    return formula( std::make_shared<const node>( node{ k, {}, {}, std::move( l ), std::move( r ), sz } ) );       \
  }

HYLTL_BINARY( conjunction, formula_kind::conjunction )
HYLTL_BINARY( disjunction, formula_kind::disjunction )
HYLTL_BINARY( until, formula_kind::until )
HYLTL_BINARY( release, formula_kind::release )

#undef HYLTL_BINARY

formula formula::eventually( formula f )
{
  return until( top(), std::move( f ) );
}

formula formula::globally( formula f )
{
  return negation( eventually( negation( std::move( f ) ) ) );
}

formula formula::implies( formula l, formula r )
{
  return disjunction( negation( std::move( l ) ), std::move( r ) );
}

formula_kind formula::kind() const
{
  return node_->kind;
}

const flow_atom& formula::atom() const
{
  return *node_->atom;
}

const std::string& formula::action_name() const
{
  return node_->action;
}

const formula& formula::lhs() const
{
  return *node_->lhs;
}

const formula& formula::rhs() const
{
  return *node_->rhs;
}

std::size_t formula::size() const
{
  return node_->size;
}

bool operator==( const formula& a, const formula& b )
{
  return ( a <=> b ) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>( const formula& a, const formula& b )
{
  if ( a.node_ == b.node_ )
    return std::strong_ordering::equal;
  if ( auto c = a.kind() <=> b.kind(); c != 0 )
    return c;
  switch ( a.kind() )
  {
  case formula_kind::top:
  case formula_kind::bottom:
    return std::strong_ordering::equal;
  case formula_kind::flow_atom:
    return a.atom().key() <=> b.atom().key();
  case formula_kind::action_atom:
    return a.action_name() <=> b.action_name();
  case formula_kind::negation:
  case formula_kind::next:
    return a.child() <=> b.child();
  default:
    if ( auto c = a.lhs() <=> b.lhs(); c != 0 )
      return c;
    return a.rhs() <=> b.rhs();
  }
}

std::string to_string( const formula& f )
{
  switch ( f.kind() )
  {
  case formula_kind::top:
    return "true";
  case formula_kind::bottom:
    return "false";
  case formula_kind::flow_atom:
    return f.atom().name.empty() ? "(" + to_string( f.atom().condition ) + ")" : f.atom().name;
  case formula_kind::action_atom:
    return f.action_name();
  case formula_kind::negation:
    return "!" + to_string( f.child() );
  case formula_kind::next:
    return "X " + to_string( f.child() );
  case formula_kind::conjunction:
    return "(" + to_string( f.lhs() ) + " & " + to_string( f.rhs() ) + ")";
  case formula_kind::disjunction:
    return "(" + to_string( f.lhs() ) + " | " + to_string( f.rhs() ) + ")";
  case formula_kind::until:
    return "(" + to_string( f.lhs() ) + " U " + to_string( f.rhs() ) + ")";
  case formula_kind::release:
    return "(" + to_string( f.lhs() ) + " R " + to_string( f.rhs() ) + ")";
  }
  return "?";
}

bool declarations::is_variable( const std::string& name ) const
{
  return std::find( variables.begin(), variables.end(), name ) != variables.end();
}

bool declarations::is_action( const std::string& name ) const
{
  return std::find( actions.begin(), actions.end(), name ) != actions.end();
}

const named_constraint* declarations::find_constraint( const std::string& name ) const
{
  for ( const auto& c : constraints )
    if ( c.name == name )
      return &c;
  return nullptr;
}

std::optional<constraint> complement_of( const flow_atom& atom, const declarations& decl )
{
  if ( !atom.name.empty() )
  {
    if ( const auto* nc = decl.find_constraint( atom.name ); nc && nc->complement )
      return nc->complement;
    return std::nullopt;
  }
  if ( auto rel = complement( atom.condition.rel ) )
    return constraint{ atom.condition.lhs, *rel, atom.condition.rhs };
  return std::nullopt;
}

namespace
{

formula nnf( const formula& f, bool negated, const declarations& decl, const nnf_options& options,
             std::vector<std::string>* warnings )
{
  switch ( f.kind() )
  {
  case formula_kind::top:
    return negated ? formula::bottom() : formula::top();
  case formula_kind::bottom:
    return negated ? formula::top() : formula::bottom();
  case formula_kind::action_atom:
    return negated ? formula::negation( f ) : f;
  case formula_kind::flow_atom:
  {
    if ( !negated )
      return f;
    if ( auto comp = complement_of( f.atom(), decl ) )
    {
      if ( warnings )
        warnings->push_back( "negated flow atom " + f.atom().key() + " replaced by its complement " +
                             to_string( *comp ) + " (holds on every sample rather than failing on some)" );
      return formula::flow( flow_atom{ "", *comp } );
    }
    if ( options.strict )
      throw error( "missing_complement", "no complement declared for negated flow constraint " + f.atom().key() );
    if ( warnings )
      warnings->push_back( "negated flow atom " + f.atom().key() + " has no complement; kept as a literal" );
    return formula::negation( f );
  }
  case formula_kind::negation:
    return nnf( f.child(), !negated, decl, options, warnings );
  case formula_kind::next:
    return formula::next( nnf( f.child(), negated, decl, options, warnings ) );
  case formula_kind::conjunction:
  case formula_kind::disjunction:
  {
    auto l = nnf( f.lhs(), negated, decl, options, warnings );
    auto r = nnf( f.rhs(), negated, decl, options, warnings );
    const bool conj = ( f.kind() == formula_kind::conjunction ) != negated;
    return conj ? formula::conjunction( l, r ) : formula::disjunction( l, r );
  }
  case formula_kind::until:
  case formula_kind::release:
  {
    auto l = nnf( f.lhs(), negated, decl, options, warnings );
    auto r = nnf( f.rhs(), negated, decl, options, warnings );
    const bool until = ( f.kind() == formula_kind::until ) != negated;
    return until ? formula::until( l, r ) : formula::release( l, r );
  }
  }
  return f;
}

void collect( const formula& f, std::set<std::string>& actions, std::vector<flow_atom>& atoms )
{
  switch ( f.kind() )
  {
  case formula_kind::action_atom:
    actions.insert( f.action_name() );
    return;
  case formula_kind::flow_atom:
    if ( std::none_of( atoms.begin(), atoms.end(), [ & ]( const flow_atom& a ) { return a.key() == f.atom().key(); } ) )
      atoms.push_back( f.atom() );
    return;
  case formula_kind::negation:
  case formula_kind::next:
    collect( f.child(), actions, atoms );
    return;
  case formula_kind::conjunction:
  case formula_kind::disjunction:
  case formula_kind::until:
  case formula_kind::release:
    collect( f.lhs(), actions, atoms );
    collect( f.rhs(), actions, atoms );
    return;
  default:
    return;
  }
}

} // namespace

formula to_nnf( const formula& f, const declarations& decl, const nnf_options& options,
                std::vector<std::string>* warnings )
{
  return nnf( f, false, decl, options, warnings );
}

bool is_nnf( const formula& f )
{
  switch ( f.kind() )
  {
  case formula_kind::negation:
    return f.child().is( formula_kind::action_atom ) || f.child().is( formula_kind::flow_atom );
  case formula_kind::next:
    return is_nnf( f.child() );
  case formula_kind::conjunction:
  case formula_kind::disjunction:
  case formula_kind::until:
  case formula_kind::release:
    return is_nnf( f.lhs() ) && is_nnf( f.rhs() );
  default:
    return true;
  }
}

std::vector<std::string> actions_of( const formula& f )
{
  std::set<std::string> actions;
  std::vector<flow_atom> atoms;
  collect( f, actions, atoms );
  return { actions.begin(), actions.end() };
}

std::vector<flow_atom> flow_atoms_of( const formula& f )
{
  std::set<std::string> actions;
  std::vector<flow_atom> atoms;
  collect( f, actions, atoms );
  return atoms;
}

} // namespace hyltl
