#include "pdsc/abstraction.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <set>
#include <deque>
#include <sstream>

namespace pdsc {

Expr lift(const Expr &psi, const PredicateSet &P) {
  if (auto i = P.index_of(psi))
    return mk_var(PredicateSet::bvar(*i));
  switch (psi.op()) {
  case Op::True:
  case Op::False:
    return psi;
  case Op::Not:
    return mk_not(lift(psi.args()[0], P));
  case Op::And:
  case Op::Or: {
    std::vector<Expr> args;
    for (const auto &a : psi.args())
      args.push_back(lift(a, P));
    return psi.op() == Op::And ? mk_and(std::move(args)) : mk_or(std::move(args));
  }
  case Op::Implies:
    return mk_implies(lift(psi.args()[0], P), lift(psi.args()[1], P));
  case Op::Iff:
    return mk_iff(lift(psi.args()[0], P), lift(psi.args()[1], P));
  default:
    throw LiftError("atom " + psi.to_wire() + " is not in the predicate set");
  }
}

Expr lower(const Expr &phi, const PredicateSet &P) {
  return map_vars(phi, [&](const Var &v) -> Expr {
    if (v.base.size() < 4 || v.base.compare(0, 3, "__b") != 0 || v.copy)
      throw LiftError("lower: " + v.display() + " is not a predicate variable");
    std::size_t i = std::strtoul(v.base.c_str() + 3, nullptr, 10);
    if (i >= P.size())
      throw LiftError("lower: predicate index out of range: " + v.display());
    return v.primed ? prime(P[i]) : P[i];
  });
}

Expr state_cube(const AbstractState &s, const PredicateSet &P) {
  std::vector<Expr> lits;
  for (std::size_t i = 0; i < s.width(); ++i)
    lits.push_back(s.get(i) ? P[i] : mk_not(P[i]));
  return mk_and(std::move(lits));
}

std::string to_string(const AbstractTrace &t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i)
      out += " -> ";
    out += t[i].state.to_string();
    if (t[i].schedule)
      out += " " + t[i].schedule->to_string();
  }
  return out;
}

std::string AbsGraph::to_dot() const {
  std::ostringstream os;
  os << "digraph abs {\n  node [shape=box, fontname=monospace];\n";
  auto is_in = [](const std::vector<AbstractState> &v, const AbstractState &s) {
    for (const auto &x : v)
      if (x == s)
        return true;
    return false;
  };
  for (const auto &n : nodes) {
    os << "  \"" << n.to_string() << "\"";
    if (is_in(bad, n))
      os << " [color=red]";
    else if (is_in(initial, n))
      os << " [style=bold]";
    os << ";\n";
  }
  for (const auto &[a, M, b] : edges)
    os << "  \"" << a.to_string() << "\" -> \"" << b.to_string() << "\" [label=\"" << M.to_string() << "\"];\n";
  os << "}\n";
  return os.str();
}

Abstraction::Abstraction(SolverSession &s, const TransitionSystem &ts, int k, const PredicateSet &P,
                         std::size_t all_sat_cap)
    : s_(s), ts_(ts), k_(k), P_(P), cap_(all_sat_cap) {
  if (P.size() > AbstractState::max_width)
    throw std::invalid_argument("at most 64 predicates are supported");
  for (int i = 1; i <= k; ++i)
    tb_.lifted.push_back(lift(ts.terminal_of(i), P));
  s_.push();
  for (std::size_t i = 0; i < P.size(); ++i) {
    s_.add(mk_iff(mk_var(PredicateSet::bvar(i)), P[i]));
    s_.add(mk_iff(mk_var(PredicateSet::bvar(i, true)), prime(P[i])));
  }
  // Keep every program variable declared even if no predicate mentions it.
  for (const auto &v : ts.composed_vars(k)) {
    s_.declare(v);
    s_.declare(v.with_primed(true));
  }
}

Abstraction::~Abstraction() {
  try {
    if (s_.live())
      s_.pop();
  } catch (...) {
  }
}

Var Abstraction::activation(ScheduleSet M) {
  auto it = act_.find(M);
  if (it != act_.end())
    return it->second;
  Var a("__act" + std::to_string(M.mask()), Sort::bool_sort());
  s_.add(mk_implies(mk_var(a), phi(ts_, k_, M)));
  act_.emplace(M, a);
  return a;
}

std::vector<AbstractState> Abstraction::to_states(const std::vector<std::vector<bool>> &rows) const {
  std::vector<AbstractState> out;
  out.reserve(rows.size());
  for (const auto &r : rows)
    out.push_back(AbstractState::from_bools(r));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<AbstractState> Abstraction::abstract_states_of(const Expr &phi) {
  return to_states(s_.all_models(phi, P_.bvars(false), cap_));
}

const std::vector<AbstractState> &Abstraction::initial_states(const Expr &pre) {
  auto it = init_cache_.find(pre);
  if (it == init_cache_.end())
    it = init_cache_.emplace(pre, abstract_states_of(pre)).first;
  return it->second;
}

const std::vector<AbstractState> &Abstraction::successors(const AbstractState &s, ScheduleSet M) {
  auto key = std::make_pair(s, M);
  auto it = succ_cache_.find(key);
  if (it != succ_cache_.end())
    return it->second;
  Var act = activation(M);
  ++succ_queries_;
  s_.push();
  std::vector<std::vector<bool>> rows;
  try {
    s_.add(bool_cube(s));
    s_.add(mk_var(act));
    rows = s_.enumerate(P_.bvars(true), cap_);
  } catch (...) {
    if (s_.live())
      s_.pop();
    throw;
  }
  s_.pop();
  return succ_cache_.emplace(key, to_states(rows)).first->second;
}

ReachResult Abstraction::abs_reach(const CompositionFunction &f, const Expr &pre, const Expr &post,
                                   const Expr &unreach, const ReachLimits &limits, AbsGraph *graph) {
  const auto &init = initial_states(pre);

  Expr post_b = lift(post, P_);
  auto bad_kind = [&](const AbstractState &s) -> std::optional<CexKind> {
    if (eval_on(unreach, s))
      return CexKind::S2;
    if (tb_.all_terminal(s) && !eval_on(post_b, s))
      return CexKind::S1;
    return std::nullopt;
  };

  std::size_t cap = limits.max_states;
  if (cap == 0)
    cap = P_.size() >= 63 ? std::numeric_limits<std::size_t>::max() : (std::size_t(1) << P_.size());

  struct Parent {
    std::optional<AbstractState> prev;
    std::optional<ScheduleSet> via;
  };
  std::unordered_map<AbstractState, Parent, AbstractStateHash> parent;
  ReachResult r;
  std::deque<AbstractState> queue;

  auto make_trace = [&](const AbstractState &last) {
    AbstractTrace t;
    std::optional<AbstractState> cur = last;
    std::optional<ScheduleSet> next_schedule;
    while (cur) {
      t.push_back({*cur, next_schedule});
      const Parent &p = parent.at(*cur);
      next_schedule = p.via;
      cur = p.prev;
    }
    std::reverse(t.begin(), t.end());
    return t;
  };

  auto discover = [&](const AbstractState &s, std::optional<AbstractState> prev,
                      std::optional<ScheduleSet> via) -> bool {
    if (parent.count(s))
      return false;
    parent.emplace(s, Parent{prev, via});
    r.reachable.push_back(s);
    if (graph)
      graph->nodes.push_back(s);
    if (auto kind = bad_kind(s)) {
      if (graph)
        graph->bad.push_back(s);
      r.safe = false;
      r.kind = *kind;
      r.trace = make_trace(s);
      return true;
    }
    if (r.reachable.size() > cap)
      throw ResourceLimitError("abstract state cap of " + std::to_string(cap) + " exceeded");
    queue.push_back(s);
    return false;
  };

  for (const auto &s : init) {
    if (graph)
      graph->initial.push_back(s);
    if (discover(s, std::nullopt, std::nullopt)) {
      r.explored = r.reachable.size();
      return r;
    }
  }

  while (!queue.empty()) {
    if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline)
      throw ResourceLimitError("time limit reached during abstract reachability");
    AbstractState s = queue.front();
    queue.pop_front();
    auto M = f.value_of(s);
    if (!M)
      throw InternalError("composition undefined at reachable abstract state " + s.to_string());
    for (const auto &t : successors(s, *M)) {
      if (graph)
        graph->edges.emplace_back(s, *M, t);
      if (discover(t, s, *M)) {
        r.explored = r.reachable.size();
        return r;
      }
    }
  }

  // Safe: the visited set is the invariant.  Re-check its defining properties.
  std::set<AbstractState> visited(r.reachable.begin(), r.reachable.end());
  for (const auto &s : init)
    if (!visited.count(s))
      throw InternalError("initial abstract state missing from the invariant");
  std::vector<Expr> cubes;
  for (const auto &s : r.reachable) {
    if (bad_kind(s))
      throw InternalError("invariant contains a bad abstract state " + s.to_string());
    for (const auto &t : successors(s, *f.value_of(s)))
      if (!visited.count(t))
        throw InternalError("invariant is not closed under abstract successors");
    cubes.push_back(bool_cube(s));
  }
  r.safe = true;
  r.inv = mk_or(std::move(cubes));
  r.explored = r.reachable.size();
  return r;
}

} // namespace pdsc
