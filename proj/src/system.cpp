#include "pdsc/system.hpp"

#include <set>
#include <stdexcept>

namespace pdsc {

namespace {

Expr frame(const std::vector<Var> &vars) {
  std::vector<Expr> eqs;
  for (const auto &v : vars)
    eqs.push_back(mk_eq(mk_var(v.with_primed(true)), mk_var(v)));
  return mk_and(std::move(eqs));
}

Expr shadow(const Expr &f) {
  return map_vars(f, [](const Var &v) { return mk_var(Var("__w_" + v.base, v.sort, v.copy, v.primed)); });
}

} // namespace

void TransitionSystem::validate() const {
  std::set<std::string> names;
  for (const auto &v : vars) {
    if (v.copy || v.primed)
      throw std::invalid_argument("system variable " + v.display() + " must be copy-free and unprimed");
    if (!names.insert(v.base).second)
      throw std::invalid_argument("duplicate variable " + v.base);
  }
  auto known = [&](const Var &v) {
    for (const auto &w : vars)
      if (w.base == v.base)
        return w.sort == v.sort;
    return false;
  };
  for (const auto &v : free_vars(trans)) {
    if (v.copy || !known(v))
      throw std::invalid_argument("transition relation mentions unknown variable " + v.display());
  }
  for (const auto &v : free_vars(terminal)) {
    if (v.copy || v.primed || !known(v))
      throw std::invalid_argument("terminal condition mentions " + v.display() + " outside V");
  }
  if (!trans.is_bool() || !terminal.is_bool())
    throw std::invalid_argument("transition relation and terminal condition must be boolean");
}

std::vector<Var> TransitionSystem::composed_vars(int k) const {
  std::vector<Var> out;
  for (int i = 1; i <= k; ++i)
    for (const auto &v : vars)
      out.push_back(v.with_copy(i));
  return out;
}

void KSafetyProperty::validate(const TransitionSystem &ts) const {
  if (k < 1)
    throw std::invalid_argument("k must be at least 1");
  for (const auto *f : {&pre, &post}) {
    if (!f->is_bool())
      throw std::invalid_argument("pre/post must be boolean");
    for (const auto &v : free_vars(*f)) {
      if (!v.copy || *v.copy < 1 || *v.copy > k)
        throw std::invalid_argument("property variable " + v.display() + " needs a copy index in 1.." +
                                    std::to_string(k));
      if (v.primed)
        throw std::invalid_argument("property variable " + v.display() + " is primed");
      bool found = false;
      for (const auto &w : ts.vars)
        found = found || (w.base == v.base && w.sort == v.sort);
      if (!found)
        throw std::invalid_argument("property mentions unknown variable " + v.display());
    }
  }
}

PredicateSet::PredicateSet(const std::vector<Expr> &preds) {
  for (const auto &p : preds)
    add(p);
}

bool PredicateSet::add(const Expr &p) {
  if (!p.is_bool())
    throw SortError("predicate is not boolean: " + p.to_wire());
  if (p.is_true() || p.is_false())
    return false;
  if (index_.count(p))
    return false;
  index_.emplace(p, preds_.size());
  preds_.push_back(p);
  return true;
}

std::optional<std::size_t> PredicateSet::index_of(const Expr &p) const {
  auto it = index_.find(p);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

Var PredicateSet::bvar(std::size_t i, bool primed) {
  return Var("__b" + std::to_string(i), Sort::bool_sort(), std::nullopt, primed);
}

std::vector<Var> PredicateSet::bvars(bool primed) const {
  std::vector<Var> out;
  for (std::size_t i = 0; i < preds_.size(); ++i)
    out.push_back(bvar(i, primed));
  return out;
}

WellformedReport check_wellformed(SolverSession &s, const TransitionSystem &ts) {
  WellformedReport r;
  r.terminal_stutters = s.is_valid(mk_implies(mk_and(ts.terminal, ts.trans), frame(ts.vars)));
  std::map<Var, Expr> unprime;
  for (const auto &v : ts.vars)
    unprime[v.with_primed(true)] = mk_var(v);
  r.self_loop = s.is_valid(mk_implies(ts.terminal, substitute(ts.trans, unprime)));
  return r;
}

AdequacyResult check_adequacy(SolverSession &s, const Expr &f, const PredicateSet &P) {
  AdequacyResult r;
  std::vector<Expr> q{f, mk_not(shadow(f))};
  for (const auto &p : P.preds())
    q.push_back(mk_iff(p, shadow(p)));
  s.push();
  try {
    for (const auto &a : q)
      s.add(a);
    switch (s.check()) {
    case SatStatus::Unsat:
      r.adequate = Tri::True;
      break;
    case SatStatus::Sat: {
      r.adequate = Tri::False;
      std::string bits;
      for (const auto &v : s.term_values(P.preds()))
        bits += decode_bool(v) ? '1' : '0';
      r.splitting_state = bits;
      break;
    }
    case SatStatus::Unknown:
      r.adequate = Tri::Unknown;
      break;
    }
  } catch (...) {
    if (s.live())
      s.pop();
    throw;
  }
  s.pop();
  return r;
}

namespace {

bool has_primed(const Expr &f) {
  for (const auto &v : free_vars(f))
    if (v.primed)
      return true;
  return false;
}

bool is_arith_atom(const Expr &a) {
  switch (a.op()) {
  case Op::Eq:
    return !a.args()[0].sort().is_array();
  case Op::Lt:
  case Op::Le:
  case Op::Gt:
  case Op::Ge:
    return true;
  default:
    return false;
  }
}

} // namespace

PredicateSet mine_predicates(const TransitionSystem &ts, const KSafetyProperty &prop) {
  PredicateSet P;
  for (const auto &a : atoms_of(prop.pre))
    P.add(a);
  for (const auto &a : atoms_of(prop.post))
    P.add(a);

  std::set<std::string> control;
  auto note_ints = [&](const Expr &atom) {
    for (const auto &v : free_vars(atom))
      if (v.sort.is_int())
        control.insert(v.base);
  };
  for (const auto &a : atoms_of(ts.terminal))
    note_ints(a);
  for (const auto &a : atoms_of(ts.trans))
    if (is_arith_atom(a) && !has_primed(a))
      note_ints(a);
  for (const auto &v : ts.vars) {
    if (!control.count(v.base))
      continue;
    for (int i = 1; i <= prop.k; ++i)
      for (int j = i + 1; j <= prop.k; ++j)
        P.add(mk_eq(mk_var(v.with_copy(i)), mk_var(v.with_copy(j))));
  }

  auto term_atoms = atoms_of(ts.terminal);
  for (int i = 1; i <= prop.k; ++i)
    for (const auto &a : term_atoms)
      P.add(rename_copy(a, i));
  return P;
}

PredicateSet merge_predicates(const PredicateSet &mined, const std::vector<Expr> &user) {
  PredicateSet out = mined;
  for (const auto &p : user)
    out.add(p);
  return out;
}

} // namespace pdsc
