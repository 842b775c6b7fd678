#include "pdsc/engine.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>

namespace pdsc {

bool CheckPairReport::passed() const {
  return initiation == Tri::True && consecution == Tri::True && safety == Tri::True && coverage == Tri::True &&
         fairness == Tri::True;
}

bool CheckPairReport::inconclusive() const {
  for (Tri t : {initiation, consecution, safety, coverage, fairness})
    if (t == Tri::False)
      return false;
  return !passed();
}

const char *to_string(BmcResult::Status s) {
  switch (s) {
  case BmcResult::Status::Concrete:
    return "concrete";
  case BmcResult::Status::Spurious:
    return "spurious";
  case BmcResult::Status::Inconclusive:
    return "inconclusive";
  }
  return "?";
}

const char *to_string(VerdictKind k) {
  switch (k) {
  case VerdictKind::Verified:
    return "verified";
  case VerdictKind::NoSolution:
    return "no-solution";
  case VerdictKind::ResourceLimit:
    return "resource-limit";
  }
  return "?";
}

namespace {

Tri conj(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False)
    return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown)
    return Tri::Unknown;
  return Tri::True;
}

Expr all_terminal(const TransitionSystem &ts, int k) {
  std::vector<Expr> parts;
  for (int i = 1; i <= k; ++i)
    parts.push_back(ts.terminal_of(i));
  return mk_and(std::move(parts));
}

} // namespace

CheckPairReport check_pair(SolverSession &s, const TransitionSystem &ts, const KSafetyProperty &prop,
                           const CompositionFunction &f, const Expr &inv) {
  CheckPairReport r;
  const int k = prop.k;
  r.initiation = s.is_valid(mk_implies(prop.pre, inv));

  r.consecution = Tri::True;
  for (const auto &[M, c] : f.conditions()) {
    Tri t = s.is_valid(mk_implies(mk_and({inv, c, phi(ts, k, M)}), prime(inv)));
    r.consecution = conj(r.consecution, t);
    if (t == Tri::False)
      break;
  }

  r.safety = s.is_valid(mk_implies(inv, mk_implies(all_terminal(ts, k), prop.post)));

  std::vector<Expr> conds;
  for (const auto &[M, c] : f.conditions())
    conds.push_back(c);
  r.coverage = s.is_valid(mk_implies(inv, mk_or(conds)));

  std::vector<Expr> running;
  for (int j = 1; j <= k; ++j)
    running.push_back(mk_not(ts.terminal_of(j)));
  r.fairness = Tri::True;
  for (const auto &[M, c] : f.conditions()) {
    std::vector<Expr> scheduled;
    for (int j : M.members())
      scheduled.push_back(mk_not(ts.terminal_of(j)));
    Tri t = s.is_valid(mk_implies(mk_and(c, mk_or(running)), mk_or(scheduled)));
    r.fairness = conj(r.fairness, t);
    if (t == Tri::False)
      break;
  }
  return r;
}

namespace {

Var at_step(const Var &v, std::size_t t) {
  std::size_t when = v.primed ? t + 1 : t;
  return Var("__t" + std::to_string(when) + "_" + v.base, v.sort, v.copy, false);
}

Expr at(const Expr &f, std::size_t t) {
  return map_vars(f, [t](const Var &v) { return mk_var(at_step(v, t)); });
}

} // namespace

BmcResult bmc_check(SolverSession &s, const TransitionSystem &ts, const KSafetyProperty &prop,
                    const PredicateSet &P, const AbstractTrace &trace, const CompositionFunction &f) {
  BmcResult r;
  if (trace.empty())
    throw std::invalid_argument("bmc_check on an empty trace");
  std::vector<Expr> q{at(prop.pre, 0)};
  for (std::size_t t = 0; t < trace.size(); ++t) {
    q.push_back(at(state_cube(trace[t].state, P), t));
    if (t + 1 < trace.size()) {
      if (!trace[t].schedule)
        throw std::invalid_argument("trace step without a schedule");
      ScheduleSet M = *trace[t].schedule;
      q.push_back(at(f.condition(M), t));
      q.push_back(at(phi(ts, prop.k, M), t));
    }
  }
  const std::size_t last = trace.size() - 1;
  q.push_back(at(all_terminal(ts, prop.k), last));
  q.push_back(at(mk_not(prop.post), last));

  auto vars = ts.composed_vars(prop.k);
  std::vector<Var> want;
  for (std::size_t t = 0; t <= last; ++t)
    for (const auto &v : vars)
      want.push_back(at_step(v, t));
  SatResult res = s.check_sat(q, want);
  switch (res.status) {
  case SatStatus::Unsat:
    r.status = BmcResult::Status::Spurious;
    break;
  case SatStatus::Unknown:
    r.status = BmcResult::Status::Inconclusive;
    break;
  case SatStatus::Sat:
    r.status = BmcResult::Status::Concrete;
    for (std::size_t t = 0; t <= last; ++t) {
      std::map<Var, std::string> step;
      for (const auto &v : vars)
        step[v] = res.model.at(at_step(v, t));
      r.states.push_back(std::move(step));
    }
    break;
  }
  return r;
}

std::pair<AbstractState, ScheduleSet> last_step(const AbstractTrace &t) {
  if (t.size() < 2)
    throw std::out_of_range("last_step needs a trace with at least one transition");
  const TraceStep &s = t[t.size() - 2];
  if (!s.schedule)
    throw std::invalid_argument("trace step without a schedule");
  return {s.state, *s.schedule};
}

AbstractTrace remove_last_step(const AbstractTrace &t) {
  if (t.size() < 2)
    throw std::out_of_range("remove_last_step needs a trace with at least one transition");
  AbstractTrace out(t.begin(), t.end() - 1);
  out.back().schedule.reset();
  return out;
}

Verdict verify(SolverSession &s, const TransitionSystem &ts, const KSafetyProperty &prop, const PredicateSet &P,
               const EngineLimits &limits, const IterationObserver &observer) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const std::size_t queries_before = s.queries();
  Verdict v;
  auto &st = v.stats;
  st.iteration_bound = std::ldexp(static_cast<double>((1U << prop.k) - 1), static_cast<int>(P.size()));

  Abstraction abs(s, ts, prop.k, P, limits.all_sat_cap);
  const TermBits &tb = abs.term_bits();
  ReachLimits rl;
  rl.max_states = limits.max_abstract_states;
  if (limits.timeout_secs > 0)
    rl.deadline = start + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(limits.timeout_secs));

  CompositionFunction f = lockstep(prop.k);
  ExclusionSet E;
  Expr unreach = mk_false();
  std::deque<std::pair<AbstractTrace, CompositionFunction>> s1_traces;
  AbsGraph graph;

  auto finish = [&](VerdictKind kind, std::string reason) {
    v.kind = kind;
    v.reason = std::move(reason);
    st.exclusions = E.size();
    st.successor_queries = abs.successor_queries();
    st.solver_queries = s.queries() - queries_before;
    st.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    if (limits.dump_absgraph) {
      std::ofstream out(*limits.dump_absgraph);
      out << graph.to_dot();
    }
    return v;
  };

  auto lower_f = [&](const CompositionFunction &g) {
    return g.mapped([&](const Expr &c) { return lower(c, P); });
  };

  auto no_solution = [&](std::string reason) {
    for (auto it = s1_traces.rbegin(); it != s1_traces.rend(); ++it) {
      BmcResult b = bmc_check(s, ts, prop, P, it->first, lower_f(it->second));
      if (b.status == BmcResult::Status::Concrete) {
        v.witness = std::move(b);
        v.witness_trace = it->first;
        break;
      }
    }
    return finish(VerdictKind::NoSolution, std::move(reason));
  };

  const auto &init = abs.initial_states(prop.pre);
  auto pre_meets_unreach = [&] {
    for (const auto &i : init)
      if (eval_on(unreach, i))
        return true;
    return false;
  };
  auto block = [&](const AbstractState &a) {
    unreach = mk_or(unreach, bool_cube(a));
    ++st.unreach_cubes;
  };

  try {
    for (;;) {
      if (limits.max_iters && st.iterations >= limits.max_iters)
        return finish(VerdictKind::ResourceLimit, "iteration limit of " + std::to_string(limits.max_iters));
      if (rl.deadline && clock::now() > *rl.deadline)
        return finish(VerdictKind::ResourceLimit, "time limit reached");
      ++st.iterations;
      if (static_cast<double>(st.iterations) > st.iteration_bound)
        throw InternalError("iteration bound 2^|P|*(2^k-1) exceeded");

      if (limits.check_fairness && fairness_holds(s, f, tb) != Tri::True)
        throw InternalError("candidate composition is not fair");

      graph = AbsGraph{};
      ReachResult res = abs.abs_reach(f, prop.pre, prop.post, unreach, rl, limits.dump_absgraph ? &graph : nullptr);
      st.states_explored += res.explored;
      st.last_reach_states = res.explored;
      if (st.iterations == 1)
        st.lockstep_cex = !res.safe;
      if (observer)
        observer(IterationEvent{st.iterations, f, res});

      if (res.safe) {
        v.f = lower_f(f);
        v.inv = lower(res.inv, P);
        v.check = check_pair(s, ts, prop, *v.f, v.inv);
        if (v.check->passed())
          return finish(VerdictKind::Verified, "");
        if (v.check->inconclusive())
          return finish(VerdictKind::ResourceLimit, "solver could not confirm the composition-invariant pair");
        throw InternalError("inferred composition-invariant pair failed re-validation");
      }

      AbstractTrace trace = res.trace;
      if (res.kind == CexKind::S1) {
        s1_traces.emplace_back(trace, f);
        if (s1_traces.size() > 8)
          s1_traces.pop_front();
        if (limits.bmc_each_cex) {
          BmcResult b = bmc_check(s, ts, prop, P, trace, lower_f(f));
          if (b.status == BmcResult::Status::Concrete) {
            v.witness = std::move(b);
            v.witness_trace = trace;
            return finish(VerdictKind::NoSolution, "concrete counterexample");
          }
        }
      }

      if (trace.size() == 1) {
        block(trace.front().state);
        if (pre_meets_unreach())
          return no_solution("an initial abstract state must be unreachable");
        throw InternalError("length-1 counterexample from a non-initial state");
      }

      auto [state, M] = last_step(trace);
      E.insert(state, M);
      while (all_excluded_or_starving(state, E, tb)) {
        block(state);
        if (pre_meets_unreach())
          return no_solution("an initial abstract state must be unreachable");
        trace = remove_last_step(trace);
        if (trace.size() < 2)
          throw InternalError("counterexample exhausted without reaching an initial state");
        std::tie(state, M) = last_step(trace);
        E.insert(state, M);
      }
      auto current = f.value_of(state);
      if (!current || *current != M)
        throw InternalError("trace schedule disagrees with the composition at " + state.to_string());
      f = modify(f, state, M, E, tb);
    }
  } catch (const ResourceLimitError &e) {
    return finish(VerdictKind::ResourceLimit, e.what());
  }
}

} // namespace pdsc
