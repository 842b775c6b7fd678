#include "pdsc/composition.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

namespace pdsc {

// ---------------------------------------------------------------------------
// ScheduleSet
// ---------------------------------------------------------------------------

ScheduleSet::ScheduleSet(std::uint32_t mask) : mask_(mask) {
  if (mask == 0)
    throw std::invalid_argument("schedule set must be nonempty");
}

ScheduleSet ScheduleSet::all(int k) { return ScheduleSet((1U << k) - 1U); }

ScheduleSet ScheduleSet::of(std::initializer_list<int> copies) {
  std::uint32_t m = 0;
  for (int c : copies)
    m |= 1U << (c - 1);
  return ScheduleSet(m);
}

std::vector<ScheduleSet> ScheduleSet::every(int k) {
  std::vector<ScheduleSet> out;
  for (std::uint32_t m = 1; m < (1U << k); ++m)
    out.emplace_back(m);
  return out;
}

int ScheduleSet::size() const { return std::popcount(mask_); }

std::vector<int> ScheduleSet::members() const {
  std::vector<int> out;
  for (int j = 1; j <= 32; ++j)
    if (contains(j))
      out.push_back(j);
  return out;
}

std::string ScheduleSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int j : members()) {
    if (!first)
      s += ',';
    s += std::to_string(j);
    first = false;
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// AbstractState
// ---------------------------------------------------------------------------

AbstractState::AbstractState(std::size_t width, std::uint64_t bits) : width_(width), bits_(bits) {
  if (width > max_width)
    throw std::invalid_argument("at most 64 predicates are supported");
  if (width < 64)
    bits_ &= (std::uint64_t(1) << width) - 1;
}

AbstractState AbstractState::from_bools(const std::vector<bool> &v) {
  std::uint64_t b = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i])
      b |= std::uint64_t(1) << i;
  return AbstractState(v.size(), b);
}

AbstractState AbstractState::parse(const std::string &s) {
  std::vector<bool> v;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("bad abstract state '" + s + "'");
    v.push_back(c == '1');
  }
  return from_bools(v);
}

std::string AbstractState::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < width_; ++i)
    s += get(i) ? '1' : '0';
  return s;
}

namespace {

std::size_t bit_index(const Var &v) {
  if (v.base.size() < 4 || v.base.compare(0, 3, "__b") != 0 || v.copy)
    throw InternalError("not a predicate variable: " + v.display());
  return static_cast<std::size_t>(std::strtoul(v.base.c_str() + 3, nullptr, 10));
}

} // namespace

bool eval_on(const Expr &lifted, const AbstractState &s) {
  return eval_bool(lifted, [&](const Var &v) {
    std::size_t i = bit_index(v);
    if (i >= s.width())
      throw InternalError("predicate index out of range: " + v.display());
    return s.get(i);
  });
}

Expr bool_cube(const AbstractState &s, bool primed) {
  std::vector<Expr> lits;
  for (std::size_t i = 0; i < s.width(); ++i) {
    Expr b = mk_var(PredicateSet::bvar(i, primed));
    lits.push_back(s.get(i) ? b : mk_not(b));
  }
  return mk_and(std::move(lits));
}

// ---------------------------------------------------------------------------
// Starvation and exclusions
// ---------------------------------------------------------------------------

bool TermBits::all_terminal(const AbstractState &s) const {
  for (int i = 1; i <= k(); ++i)
    if (!terminal(s, i))
      return false;
  return true;
}

bool is_starving(const AbstractState &s, ScheduleSet M, const TermBits &tb) {
  bool some_running = false;
  for (int i = 1; i <= tb.k(); ++i)
    some_running = some_running || !tb.terminal(s, i);
  if (!some_running)
    return false;
  for (int j : M.members())
    if (j <= tb.k() && !tb.terminal(s, j))
      return false;
  return true;
}

bool ExclusionSet::insert(const AbstractState &s, ScheduleSet M) {
  if (!set_.emplace(s, M).second)
    return false;
  order_.emplace_back(s, M);
  return true;
}

bool ExclusionSet::contains(const AbstractState &s, ScheduleSet M) const { return set_.count({s, M}) > 0; }

bool all_excluded_or_starving(const AbstractState &s, const ExclusionSet &E, const TermBits &tb) {
  for (auto M : ScheduleSet::every(tb.k()))
    if (!is_starving(s, M, tb) && !E.contains(s, M))
      return false;
  return true;
}

std::vector<ScheduleSet> admissible_values(const AbstractState &s, const ExclusionSet &E, const TermBits &tb) {
  std::vector<ScheduleSet> out;
  for (auto M : ScheduleSet::every(tb.k()))
    if (!is_starving(s, M, tb) && !E.contains(s, M))
      out.push_back(M);
  std::stable_sort(out.begin(), out.end(), [](ScheduleSet a, ScheduleSet b) {
    if (a.size() != b.size())
      return a.size() > b.size();
    return a.mask() < b.mask();
  });
  return out;
}

// ---------------------------------------------------------------------------
// CompositionFunction
// ---------------------------------------------------------------------------

CompositionFunction::CompositionFunction(int k) : k_(k) {
  if (k < 1 || k > 16)
    throw std::invalid_argument("k must be in 1..16");
}

Expr CompositionFunction::condition(ScheduleSet M) const {
  auto it = conds_.find(M);
  return it == conds_.end() ? mk_false() : it->second;
}

void CompositionFunction::set_condition(ScheduleSet M, const Expr &c) {
  if (M.mask() >= (1U << k_))
    throw std::invalid_argument("schedule " + M.to_string() + " exceeds k");
  if (c.is_false())
    conds_.erase(M);
  else
    conds_[M] = c;
  cache_.clear();
}

CompositionFunction CompositionFunction::mapped(const std::function<Expr(const Expr &)> &fn) const {
  CompositionFunction out(k_);
  for (const auto &[M, c] : conds_)
    out.set_condition(M, fn(c));
  return out;
}

std::optional<ScheduleSet> CompositionFunction::value_of(const AbstractState &s) const {
  auto it = cache_.find(s);
  if (it != cache_.end())
    return it->second;
  std::optional<ScheduleSet> found;
  for (const auto &[M, c] : conds_) {
    if (!eval_on(c, s))
      continue;
    if (found)
      throw InternalError("conditions for " + found->to_string() + " and " + M.to_string() + " overlap at " +
                          s.to_string());
    found = M;
  }
  cache_.emplace(s, found);
  return found;
}

void CompositionFunction::reassign(const AbstractState &s, ScheduleSet M_old, ScheduleSet M_new) {
  Expr cube = bool_cube(s);
  auto keep = cache_;
  set_condition(M_old, mk_and(condition(M_old), mk_not(cube)));
  set_condition(M_new, mk_or(condition(M_new), cube));
  cache_ = std::move(keep);
  cache_[s] = M_new;
}

CompositionFunction lockstep(int k) {
  CompositionFunction f(k);
  f.set_condition(ScheduleSet::all(k), mk_true());
  return f;
}

CompositionFunction sequential(int k, const Expr &terminal) {
  CompositionFunction f(k);
  for (int i = 1; i <= k; ++i) {
    std::vector<Expr> parts;
    if (i < k)
      parts.push_back(mk_not(rename_copy(terminal, i)));
    for (int j = 1; j < i; ++j)
      parts.push_back(rename_copy(terminal, j));
    f.set_condition(ScheduleSet::of({i}), mk_and(std::move(parts)));
  }
  return f;
}

Expr phi(const TransitionSystem &ts, int k, ScheduleSet M) {
  std::vector<Expr> parts;
  for (int j = 1; j <= k; ++j) {
    if (M.contains(j)) {
      parts.push_back(map_vars(ts.trans, [j](const Var &v) { return mk_var(v.with_copy(j)); }));
    } else {
      for (const auto &v : ts.vars) {
        Var c = v.with_copy(j);
        parts.push_back(mk_eq(mk_var(c.with_primed(true)), mk_var(c)));
      }
    }
  }
  return mk_and(std::move(parts));
}

Expr compose_transition(const TransitionSystem &ts, const CompositionFunction &f) {
  std::vector<Expr> disj;
  for (const auto &[M, c] : f.conditions())
    disj.push_back(mk_and(c, phi(ts, f.k(), M)));
  return mk_or(std::move(disj));
}

CompositionFunction modify(const CompositionFunction &f, const AbstractState &s, ScheduleSet M_old,
                           const ExclusionSet &E, const TermBits &tb, ScheduleSet *chosen) {
  auto candidates = admissible_values(s, E, tb);
  if (candidates.empty())
    throw std::logic_error("no admissible schedule for " + s.to_string());
  ScheduleSet M_new = candidates.front();
  if (M_new == M_old)
    throw std::logic_error("repair would keep the excluded schedule " + M_old.to_string());
  CompositionFunction out = f;
  out.reassign(s, M_old, M_new);
  if (chosen)
    *chosen = M_new;
  return out;
}

CompositionFunction normalize(const std::map<ScheduleSet, Expr> &conds, int k) {
  CompositionFunction f(k);
  std::vector<Expr> earlier;
  for (const auto &[M, c] : conds) {
    std::vector<Expr> parts{c};
    for (const auto &n : earlier)
      parts.push_back(mk_not(n));
    f.set_condition(M, mk_and(std::move(parts)));
    earlier.push_back(c);
  }
  ScheduleSet full = ScheduleSet::all(k);
  Expr uncovered = mk_not(mk_or(earlier));
  f.set_condition(full, mk_or(f.condition(full), uncovered));
  return f;
}

Tri fairness_holds(SolverSession &s, const CompositionFunction &f, const TermBits &tb) {
  std::vector<Expr> someone_running;
  for (const auto &t : tb.lifted)
    someone_running.push_back(mk_not(t));
  Expr running = mk_or(someone_running);
  Tri result = Tri::True;
  for (const auto &[M, c] : f.conditions()) {
    std::vector<Expr> scheduled_running;
    for (int j : M.members())
      scheduled_running.push_back(mk_not(tb.lifted[j - 1]));
    Tri t = s.is_valid(mk_implies(mk_and(c, running), mk_or(scheduled_running)));
    if (t == Tri::False)
      return Tri::False;
    if (t == Tri::Unknown)
      result = Tri::Unknown;
  }
  return result;
}

Tri conditions_disjoint(SolverSession &s, const CompositionFunction &f) {
  Tri result = Tri::True;
  const auto &c = f.conditions();
  for (auto a = c.begin(); a != c.end(); ++a) {
    for (auto b = std::next(a); b != c.end(); ++b) {
      Tri t = s.is_valid(mk_not(mk_and(a->second, b->second)));
      if (t == Tri::False)
        return Tri::False;
      if (t == Tri::Unknown)
        result = Tri::Unknown;
    }
  }
  return result;
}

std::string render_pseudocode(const CompositionFunction &f) {
  auto step = [](ScheduleSet M) {
    std::string s = "step(";
    bool first = true;
    for (int j : M.members()) {
      if (!first)
        s += ',';
      s += std::to_string(j);
      first = false;
    }
    return s + ")";
  };
  std::vector<std::pair<ScheduleSet, Expr>> branches(f.conditions().begin(), f.conditions().end());
  if (branches.empty())
    return "skip\n";
  std::string out;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto &[M, c] = branches[i];
    if (c.is_true())
      out += (i ? "else " : "") + step(M) + "\n";
    else
      out += (i ? "else if (" : "if (") + c.to_wire() + ") " + step(M) + "\n";
  }
  return out;
}

} // namespace pdsc
