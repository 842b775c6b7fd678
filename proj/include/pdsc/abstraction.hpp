#pragma once

#include "pdsc/composition.hpp"
#include "pdsc/smt.hpp"
#include "pdsc/system.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace pdsc {

/// lift() met an atom that is not one of the predicates.
class LiftError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// ⌈ψ⌉: replaces every predicate by its boolean variable.
Expr lift(const Expr &psi, const PredicateSet &P);
/// ⌊φ⌋: the converse substitution; primed b-variables map to primed predicates.
Expr lower(const Expr &phi, const PredicateSet &P);
/// ⌊ŝ⌋ over the program variables.
Expr state_cube(const AbstractState &s, const PredicateSet &P);

struct TraceStep {
  AbstractState state;
  std::optional<ScheduleSet> schedule; // absent on the last step
};
using AbstractTrace = std::vector<TraceStep>;

std::string to_string(const AbstractTrace &t);

enum class CexKind { S1, S2 };

struct ReachResult {
  bool safe = false;
  std::vector<AbstractState> reachable; // discovery order
  Expr inv;                              // over B, only when safe
  AbstractTrace trace;                   // only when unsafe
  CexKind kind = CexKind::S1;
  std::size_t explored = 0;
};

struct ReachLimits {
  std::size_t max_states = 0; // 0 means 2^|P|
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Explored abstract graph, kept for DOT output.
struct AbsGraph {
  std::vector<AbstractState> nodes;
  std::vector<AbstractState> initial;
  std::vector<std::tuple<AbstractState, ScheduleSet, AbstractState>> edges;
  std::vector<AbstractState> bad;

  std::string to_dot() const;
};

/// Predicate abstraction of the k-fold composition of one system.  Owns the
/// predicate definitions asserted at the base of the solver session and a
/// successor cache shared across composition candidates.  The definitions
/// live in a solver scope opened by the constructor and closed by the destructor.
class Abstraction {
public:
  Abstraction(SolverSession &s, const TransitionSystem &ts, int k, const PredicateSet &P,
              std::size_t all_sat_cap = std::size_t(1) << 20);
  ~Abstraction();
  Abstraction(const Abstraction &) = delete;
  Abstraction &operator=(const Abstraction &) = delete;

  const PredicateSet &predicates() const { return P_; }
  const TermBits &term_bits() const { return tb_; }
  int k() const { return k_; }

  std::vector<AbstractState> abstract_states_of(const Expr &phi);
  /// Cached abstract_states_of for the precondition.
  const std::vector<AbstractState> &initial_states(const Expr &pre);
  /// Exact abstract successors of ŝ under φ_M (C_M is implied by the cube).
  const std::vector<AbstractState> &successors(const AbstractState &s, ScheduleSet M);

  /// BFS from the abstraction of `pre`.  `unreach` is over B.
  ReachResult abs_reach(const CompositionFunction &f, const Expr &pre, const Expr &post, const Expr &unreach,
                        const ReachLimits &limits = {}, AbsGraph *graph = nullptr);

  std::size_t successor_queries() const { return succ_queries_; }
  std::size_t cached_transitions() const { return succ_cache_.size(); }

private:
  Var activation(ScheduleSet M);
  std::vector<AbstractState> to_states(const std::vector<std::vector<bool>> &rows) const;

  SolverSession &s_;
  const TransitionSystem &ts_;
  int k_;
  PredicateSet P_;
  TermBits tb_;
  std::size_t cap_;
  std::map<ScheduleSet, Var> act_;
  std::map<std::pair<AbstractState, ScheduleSet>, std::vector<AbstractState>> succ_cache_;
  std::unordered_map<Expr, std::vector<AbstractState>, ExprHash> init_cache_;
  std::size_t succ_queries_ = 0;
};

} // namespace pdsc
