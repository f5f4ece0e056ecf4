#pragma once

#include "hyltl/expr.hpp"
#include "hyltl/formula.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyltl
{

using valuation = std::map<std::string, double>;

/// `x` restricted to the names in `vars`.
valuation restrict( const valuation& x, const std::vector<std::string>& vars );

/// Union of two valuations; throws `valuation_conflict` when they disagree
/// on a shared variable.
valuation merge( const valuation& a, const valuation& b );

/// Default absolute tolerance for equalities on sampled data.
inline constexpr double default_tolerance = 1e-9;

/// Uniformly sampled trajectory. Derivatives are central differences
/// unless supplied.
struct sampled_trajectory
{
  double step = 0.0;
  std::vector<valuation> samples;
  std::vector<valuation> derivatives;

  static sampled_trajectory make( double step, std::vector<valuation> samples,
                                  std::vector<valuation> derivatives = {} );

  const valuation& fstate() const { return samples.front(); }
  const valuation& lstate() const { return samples.back(); }
  double ltime() const { return step * static_cast<double>( samples.size() - 1 ); }
};

bool satisfies_flow( const sampled_trajectory& tau, const constraint& c, double tol = default_tolerance );
bool satisfies_flow( const sampled_trajectory& tau, const std::vector<constraint>& cs,
                     double tol = default_tolerance );
bool satisfies_jump( const valuation& x, const valuation& xp, const constraint& c, double tol = default_tolerance );

struct location
{
  std::string name;
  std::vector<constraint> flow;
  /// Initial region; empty means every admissible valuation.
  std::vector<constraint> init;
  std::string comment;
};

struct edge
{
  std::size_t source = 0;
  std::size_t target = 0;
  std::string action;
  std::vector<constraint> jump;
};

/// Hybrid automaton with a generalized Buchi family. An empty family means
/// every run is accepting.
struct hybrid_automaton
{
  std::string name = "H";
  std::vector<std::string> variables;
  std::vector<std::string> actions;
  /// Named flow constraints with complements, available to formulas.
  std::vector<named_constraint> constraints;
  std::vector<location> locations;
  std::vector<edge> edges;
  std::vector<std::size_t> initial;
  std::vector<std::vector<std::size_t>> acceptance;

  std::optional<std::size_t> find_location( const std::string& name ) const;
  std::size_t location_index( const std::string& name ) const;
  bool is_initial( std::size_t loc ) const;
  declarations decl() const;

  /// Structural sanity: indices in range, names unique, actions declared.
  void validate() const;
};

/// `x` satisfies the derivative-free constraints of `loc`.
bool admissible( const hybrid_automaton& h, std::size_t loc, const valuation& x, double tol = default_tolerance );

/// Parallel composition. Location pairs are named `l1.l2`.
hybrid_automaton compose( const hybrid_automaton& h1, const hybrid_automaton& h2 );

struct hybrid_state
{
  std::size_t loc = 0;
  valuation x;

  friend bool operator==( const hybrid_state&, const hybrid_state& ) = default;
};

/// Concrete successors under action `a`. Primed variables are solved from
/// equalities with a single primed occurrence; unconstrained ones keep
/// their value.
std::vector<hybrid_state> discrete_step( const hybrid_automaton& h, const hybrid_state& s, const std::string& a,
                                         double tol = default_tolerance );

struct trace_step
{
  sampled_trajectory trajectory;
  std::string action;
};

/// tau_1 a_1 tau_2 a_2 ... presented as a prefix and a repeating cycle.
struct hybrid_lasso_trace
{
  std::vector<trace_step> prefix;
  std::vector<trace_step> cycle;

  std::size_t length() const { return prefix.size() + cycle.size(); }
  /// Step at a folded index in [0, length()).
  const trace_step& at( std::size_t i ) const { return i < prefix.size() ? prefix[ i ] : cycle[ i - prefix.size() ]; }
  /// Folded successor index.
  std::size_t succ( std::size_t i ) const { return i + 1 < length() ? i + 1 : prefix.size(); }
  void validate() const;
};

/// Location sequence aligned with a lasso trace.
struct lasso_witness
{
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> cycle;
};

bool is_generated( const hybrid_lasso_trace& trace, const hybrid_automaton& h, const lasso_witness& w,
                   double tol = default_tolerance );
bool accepts( const hybrid_lasso_trace& trace, const hybrid_automaton& h, const lasso_witness& w,
              double tol = default_tolerance );

/// An accepting run found by search. The run's period can be a multiple
/// of the trace's, so the trace is unrolled to match the witness.
struct accepting_run
{
  hybrid_lasso_trace trace;
  lasso_witness witness;
};

std::optional<accepting_run> find_accepting_run( const hybrid_lasso_trace& trace, const hybrid_automaton& h,
                                                 double tol = default_tolerance );

/// Discrete projection: is the action word `prefix cycle^omega` accepted
/// when flows and jump constraints are ignored?
bool accepts_word( const hybrid_automaton& h, const std::vector<std::string>& prefix,
                   const std::vector<std::string>& cycle );

/// Same locations, edges, initial set and acceptance up to a bijection of
/// location indices that preserves flows and jumps as written.
bool isomorphic( const hybrid_automaton& a, const hybrid_automaton& b );

} // namespace hyltl
