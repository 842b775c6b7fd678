#pragma once

#include "pdsc/abstraction.hpp"
#include "pdsc/composition.hpp"
#include "pdsc/smt.hpp"
#include "pdsc/system.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pdsc {

struct CheckPairReport {
  Tri initiation = Tri::Unknown;
  Tri consecution = Tri::Unknown;
  Tri safety = Tri::Unknown;
  Tri coverage = Tri::Unknown;
  Tri fairness = Tri::Unknown;

  bool passed() const;
  bool inconclusive() const;
};

/// Validity checks for a composition/invariant pair, both over the program
/// variables.  Consecution is checked per schedule.
CheckPairReport check_pair(SolverSession &s, const TransitionSystem &ts, const KSafetyProperty &prop,
                           const CompositionFunction &f, const Expr &inv);

struct BmcResult {
  enum class Status { Concrete, Spurious, Inconclusive };
  Status status = Status::Inconclusive;
  /// Per-step values of the composed variables (only for Concrete).
  std::vector<std::map<Var, std::string>> states;
};

const char *to_string(BmcResult::Status s);

/// Unrolls the composed program along the trace's cubes and schedules and asks
/// for a run that ends in a terminal state violating post.
BmcResult bmc_check(SolverSession &s, const TransitionSystem &ts, const KSafetyProperty &prop,
                    const PredicateSet &P, const AbstractTrace &trace, const CompositionFunction &f);

/// (ŝ_m, M_m): the state before the last one and its schedule.
std::pair<AbstractState, ScheduleSet> last_step(const AbstractTrace &t);
AbstractTrace remove_last_step(const AbstractTrace &t);

struct EngineLimits {
  std::size_t max_iters = 0;           // 0: only the theoretical bound
  double timeout_secs = 0;             // 0: none
  std::size_t max_abstract_states = 0; // per reachability call, 0: 2^|P|
  std::size_t all_sat_cap = std::size_t(1) << 20;
  bool bmc_each_cex = false;
  bool check_fairness = true;
  std::optional<std::string> dump_absgraph;
};

struct EngineStats {
  std::size_t iterations = 0;
  std::size_t exclusions = 0;
  std::size_t unreach_cubes = 0;
  std::size_t states_explored = 0;
  std::size_t last_reach_states = 0;
  std::size_t successor_queries = 0;
  std::size_t solver_queries = 0;
  double iteration_bound = 0;
  double wall_ms = 0;
  bool lockstep_cex = false;
};

enum class VerdictKind { Verified, NoSolution, ResourceLimit };

const char *to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::ResourceLimit;
  std::optional<CompositionFunction> f; // over the program variables
  Expr inv;                             // over the program variables
  std::string reason;
  EngineStats stats;
  std::optional<CheckPairReport> check;
  std::optional<BmcResult> witness;
  std::optional<AbstractTrace> witness_trace;
};

/// Called after every reachability call with the candidate that was checked.
struct IterationEvent {
  std::size_t iteration;
  const CompositionFunction &f; // over B
  const ReachResult &result;
};

using IterationObserver = std::function<void(const IterationEvent &)>;

/// The inference loop.  Well-formedness and adequacy must have been checked.
Verdict verify(SolverSession &s, const TransitionSystem &ts, const KSafetyProperty &prop, const PredicateSet &P,
               const EngineLimits &limits = {}, const IterationObserver &observer = {});

} // namespace pdsc
