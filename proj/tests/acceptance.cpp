// Acceptance suite.  Prints one PASS/FAIL/SKIP line per criterion and exits
// nonzero when any criterion fails.

#include "support.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <deque>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace pdsc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  enum Status { Pass, Fail, Skip } status = Fail;
  std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Fail, std::move(d)}; }

// ---------------------------------------------------------------------------
// Brute-force interpreter for small toys
// ---------------------------------------------------------------------------

constexpr int kLo = 0;
constexpr int kHi = 3;

using Copy = std::vector<int>;
using Composed = std::array<Copy, 2>;

struct Toy {
  std::string name;
  std::string text;
  int nvars;
  std::function<std::vector<Copy>(const Copy &)> step;
  std::vector<std::function<bool(const Composed &)>> preds; // same order as the file's predicates
  std::function<bool(const Composed &)> pre;
};

bool in_domain(const Copy &c) {
  return std::all_of(c.begin(), c.end(), [](int v) { return v >= kLo && v <= kHi; });
}

std::vector<Copy> all_copies(int nvars) {
  std::vector<Copy> out{Copy{}};
  for (int i = 0; i < nvars; ++i) {
    std::vector<Copy> next;
    for (const auto &c : out)
      for (int v = kLo; v <= kHi; ++v) {
        Copy d = c;
        d.push_back(v);
        next.push_back(d);
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Toy> toys() {
  std::vector<Toy> t;
  t.push_back({"counter",
               R"((vars (x Int))
(trans (or (and (< x 3) (= (next x) (+ x 1))) (and (>= x 3) (= (next x) x))))
(terminal (>= x 3))
(property (k 2) (pre (<= (copy 1 x) (copy 2 x))) (post (= (copy 1 x) (copy 2 x))))
(predicates (= (copy 1 x) (copy 2 x)) (< (copy 1 x) (copy 2 x)) (>= (copy 1 x) 3) (>= (copy 2 x) 3)))",
               1,
               [](const Copy &c) { return std::vector<Copy>{c[0] < 3 ? Copy{c[0] + 1} : c}; },
               {[](const Composed &s) { return s[0][0] == s[1][0]; },
                [](const Composed &s) { return s[0][0] < s[1][0]; },
                [](const Composed &s) { return s[0][0] >= 3; }, [](const Composed &s) { return s[1][0] >= 3; }},
               [](const Composed &s) { return s[0][0] <= s[1][0]; }});
  t.push_back({"transfer",
               R"((vars (x Int) (y Int))
(trans (or (and (> x 0) (= (next x) (- x 1)) (= (next y) (+ y 1)))
           (and (= x 0) (= (next x) x) (= (next y) y))))
(terminal (= x 0))
(property (k 2) (pre (and (= (copy 1 x) (copy 2 x)) (= (copy 1 y) (copy 2 y)))) (post (= (copy 1 y) (copy 2 y))))
(predicates (= (copy 1 x) (copy 2 x)) (= (copy 1 y) (copy 2 y)) (= (copy 1 x) 0) (= (copy 2 x) 0)))",
               2,
               [](const Copy &c) { return std::vector<Copy>{c[0] > 0 ? Copy{c[0] - 1, c[1] + 1} : c}; },
               {[](const Composed &s) { return s[0][0] == s[1][0]; },
                [](const Composed &s) { return s[0][1] == s[1][1]; },
                [](const Composed &s) { return s[0][0] == 0; }, [](const Composed &s) { return s[1][0] == 0; }},
               [](const Composed &s) { return s[0] == s[1]; }});
  t.push_back({"nondet",
               R"((vars (x Int))
(trans (or (and (< x 2) (or (= (next x) (+ x 1)) (= (next x) (+ x 2))))
           (and (>= x 2) (= (next x) x))))
(terminal (>= x 2))
(property (k 2) (pre true) (post (= (copy 1 x) (copy 2 x))))
(predicates (< (copy 1 x) (copy 2 x)) (= (copy 1 x) (copy 2 x)) (>= (copy 1 x) 2) (>= (copy 2 x) 2)))",
               1,
               [](const Copy &c) {
                 return c[0] < 2 ? std::vector<Copy>{{c[0] + 1}, {c[0] + 2}} : std::vector<Copy>{c};
               },
               {[](const Composed &s) { return s[0][0] < s[1][0]; },
                [](const Composed &s) { return s[0][0] == s[1][0]; },
                [](const Composed &s) { return s[0][0] >= 2; }, [](const Composed &s) { return s[1][0] >= 2; }},
               [](const Composed &) { return true; }});
  return t;
}

struct Oracle {
  const Toy &toy;
  std::vector<Composed> states;

  explicit Oracle(const Toy &t) : toy(t) {
    for (const auto &a : all_copies(t.nvars))
      for (const auto &b : all_copies(t.nvars))
        states.push_back({a, b});
  }

  AbstractState alpha(const Composed &c) const {
    std::vector<bool> v;
    for (const auto &p : toy.preds)
      v.push_back(p(c));
    return AbstractState::from_bools(v);
  }

  std::set<AbstractState> abstract_of(const std::function<bool(const Composed &)> &phi) const {
    std::set<AbstractState> out;
    for (const auto &c : states)
      if (phi(c))
        out.insert(alpha(c));
    return out;
  }

  std::vector<Composed> step(const Composed &c, ScheduleSet M) const {
    std::vector<Copy> first = M.contains(1) ? toy.step(c[0]) : std::vector<Copy>{c[0]};
    std::vector<Copy> second = M.contains(2) ? toy.step(c[1]) : std::vector<Copy>{c[1]};
    std::vector<Composed> out;
    for (const auto &a : first)
      for (const auto &b : second)
        if (in_domain(a) && in_domain(b))
          out.push_back({a, b});
    return out;
  }

  std::set<AbstractState> successors(const AbstractState &s, ScheduleSet M) const {
    std::set<AbstractState> out;
    for (const auto &c : states)
      if (alpha(c) == s)
        for (const auto &d : step(c, M))
          out.insert(alpha(d));
    return out;
  }

  std::set<AbstractState> reach(const CompositionFunction &f) const {
    std::set<AbstractState> seen = abstract_of(toy.pre);
    std::vector<AbstractState> work(seen.begin(), seen.end());
    while (!work.empty()) {
      AbstractState s = work.back();
      work.pop_back();
      auto M = f.value_of(s);
      if (!M)
        continue;
      for (const auto &t : successors(s, *M))
        if (seen.insert(t).second)
          work.push_back(t);
    }
    return seen;
  }
};

// Random formula over b_0..b_{w-1}.
Expr random_b_formula(std::mt19937 &rng, std::size_t w, int depth) {
  std::uniform_int_distribution<int> pick(0, 3);
  if (depth == 0 || pick(rng) == 0) {
    Expr leaf = mk_var(PredicateSet::bvar(std::uniform_int_distribution<std::size_t>(0, w - 1)(rng)));
    return pick(rng) < 2 ? leaf : mk_not(leaf);
  }
  Expr a = random_b_formula(rng, w, depth - 1);
  Expr b = random_b_formula(rng, w, depth - 1);
  switch (pick(rng)) {
  case 0:
    return mk_not(mk_and(a, b));
  case 1:
    return mk_or(a, b);
  default:
    return mk_and(a, b);
  }
}

std::vector<AbstractState> all_states(std::size_t w) {
  std::vector<AbstractState> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << w); ++bits)
    out.emplace_back(w, bits);
  return out;
}

// Every abstract state satisfies exactly one condition.
bool is_partition(const CompositionFunction &f, std::size_t w) {
  for (const auto &s : all_states(w)) {
    int hits = 0;
    for (const auto &[M, c] : f.conditions())
      hits += eval_on(c, s) ? 1 : 0;
    if (hits != 1)
      return false;
  }
  return true;
}

std::string brief(const std::set<AbstractState> &s) {
  std::string out;
  for (const auto &x : s)
    out += (out.empty() ? "" : ",") + x.to_string();
  return "{" + out + "}";
}

// ---------------------------------------------------------------------------
// Benchmark runs, shared between criteria
// ---------------------------------------------------------------------------

struct Run {
  std::string label;
  ProblemFile pf;
  PredicateSet P;
  Verdict v;
  double seconds = 0;
  bool first_cex = false;
  std::string error;
};

Run run(const std::string &label, ProblemFile pf, const EngineLimits &lim = {}) {
  Run r;
  r.label = label;
  r.pf = std::move(pf);
  r.P = merge_predicates(mine_predicates(r.pf.system, r.pf.property),
                         r.pf.predicates.value_or(std::vector<Expr>{}));
  auto t0 = Clock::now();
  try {
    SolverSession s;
    r.v = verify(s, r.pf.system, r.pf.property, r.P, lim, [&](const IterationEvent &e) {
      if (e.iteration == 1)
        r.first_cex = !e.result.safe;
    });
  } catch (const std::exception &e) {
    r.error = e.what();
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::map<std::string, Run> g_runs;

const Run &bench(const std::string &file, const EngineLimits &lim = {}) {
  auto it = g_runs.find(file);
  if (it == g_runs.end())
    it = g_runs.emplace(file, run(file, testing::load("benchmarks/" + file + ".pdsc"), lim)).first;
  return it->second;
}

std::deque<Run> g_extra; // references stay valid across push_back

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

Outcome criterion_oracle() {
  auto t0 = Clock::now();
  std::size_t compared = 0;
  std::mt19937 rng(7);
  for (const auto &toy : toys()) {
    ProblemFile pf = parse_problem(toy.text);
    PredicateSet P(*pf.predicates);
    if (P.size() != toy.preds.size() || P.size() > 4)
      return fail(toy.name + ": predicate count mismatch");
    Oracle o(toy);

    SolverSession s;
    for (const auto &v : pf.system.composed_vars(2))
      for (bool primed : {false, true}) {
        Expr e = mk_var(v.with_primed(primed));
        s.add(mk_and(mk_le(mk_int(kLo), e), mk_le(e, mk_int(kHi))));
      }
    Abstraction a(s, pf.system, 2, P);

    auto check_states = [&](const std::string &what, const Expr &phi,
                            const std::function<bool(const Composed &)> &oracle_phi) -> std::optional<Outcome> {
      auto got = a.abstract_states_of(phi);
      std::set<AbstractState> mine(got.begin(), got.end());
      auto want = o.abstract_of(oracle_phi);
      ++compared;
      if (mine != want)
        return fail(toy.name + " abstract_states_of(" + what + "): " + brief(mine) + " vs " + brief(want));
      return std::nullopt;
    };
    if (auto bad = check_states("pre", pf.property.pre, toy.pre))
      return *bad;
    if (auto bad = check_states("true", mk_true(), [](const Composed &) { return true; }))
      return *bad;
    for (std::size_t i = 0; i < P.size(); ++i)
      if (auto bad = check_states("p" + std::to_string(i), mk_not(P[i]),
                                  [&](const Composed &c) { return !toy.preds[i](c); }))
        return *bad;

    for (const auto &sh : all_states(P.size()))
      for (auto M : ScheduleSet::every(2)) {
        auto got = a.successors(sh, M);
        std::set<AbstractState> mine(got.begin(), got.end());
        auto want = o.successors(sh, M);
        ++compared;
        if (mine != want)
          return fail(toy.name + " successors(" + sh.to_string() + ", " + M.to_string() + "): " + brief(mine) +
                      " vs " + brief(want));
      }

    std::vector<CompositionFunction> fs{lockstep(2)};
    for (int i = 0; i < 20; ++i) {
      std::map<ScheduleSet, Expr> conds;
      for (auto M : ScheduleSet::every(2))
        conds[M] = random_b_formula(rng, P.size(), 2);
      fs.push_back(normalize(conds, 2));
    }
    for (const auto &f : fs) {
      ReachResult r = a.abs_reach(f, pf.property.pre, mk_true(), mk_false());
      std::set<AbstractState> mine(r.reachable.begin(), r.reachable.end());
      auto want = o.reach(f);
      ++compared;
      if (!r.safe || mine != want)
        return fail(toy.name + " abs_reach: " + brief(mine) + " vs " + brief(want));

      // With the real post the verdict must match the oracle's bad states.
      ReachResult rp = a.abs_reach(f, pf.property.pre, pf.property.post, mk_false());
      bool oracle_bad = false;
      Expr post_b = lift(pf.property.post, P);
      for (const auto &st : want)
        oracle_bad |= a.term_bits().all_terminal(st) && !eval_on(post_b, st);
      ++compared;
      if (rp.safe == oracle_bad)
        return fail(toy.name + " abs_reach verdict disagrees with the oracle");
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << compared << " comparisons on 3 toys, " << std::fixed << std::setprecision(2) << secs << " s";
  if (secs >= 10)
    return fail(d.str() + " (limit 10 s)");
  return pass(d.str());
}

std::vector<const Run *> all_runs() {
  std::vector<const Run *> out;
  for (const auto &[k, r] : g_runs)
    out.push_back(&r);
  for (const auto &r : g_extra)
    out.push_back(&r);
  return out;
}

Outcome criterion_check_pair() {
  std::size_t verified = 0;
  for (const Run *r : all_runs()) {
    if (!r->error.empty() || r->v.kind != VerdictKind::Verified)
      continue;
    ++verified;
    SolverSession s;
    CheckPairReport c = check_pair(s, r->pf.system, r->pf.property, *r->v.f, r->v.inv);
    if (!c.passed())
      return fail(r->label + ": independent check_pair failed");
  }
  if (verified == 0)
    return fail("no verified runs to check");
  return pass(std::to_string(verified) + " verified runs re-checked");
}

Outcome criterion_lockstep() {
  std::string d;
  bool ok = true;
  for (const char *name : {"squares_sum", "half_square_ni", "double_square_ni"}) {
    const Run &r = bench(name);
    bool cex = r.error.empty() && r.first_cex && r.v.stats.lockstep_cex;
    ok &= cex;
    d += std::string(d.empty() ? "" : ", ") + name + (cex ? " cex" : " no cex");
  }
  return ok ? pass(d) : fail(d);
}

Outcome criterion_table() {
  struct Row {
    const char *file;
    std::size_t baseline_iters;
  };
  std::string d;
  bool ok = true;
  for (Row row : {Row{"squares_sum", 4}, Row{"half_square_ni", 28}, Row{"double_square_ni", 33}}) {
    const Run &r = bench(row.file);
    std::ostringstream line;
    line << row.file << " ";
    if (!r.error.empty()) {
      ok = false;
      line << "error " << r.error;
    } else {
      bool good = r.v.kind == VerdictKind::Verified && r.v.stats.iterations <= 10 * row.baseline_iters && r.seconds <= 120;
      ok &= good;
      line << to_string(r.v.kind) << " " << r.v.stats.iterations << " it (baseline " << row.baseline_iters << ") "
           << std::fixed << std::setprecision(2) << r.seconds << " s";
    }
    d += (d.empty() ? "" : "; ") + line.str();
  }
  return ok ? pass(d) : fail(d);
}

bool solver_has_arrays() {
  try {
    SolverSession s;
    Sort arr = Sort::array_sort(Sort::int_sort(), Sort::int_sort());
    Expr A = mk_var(Var("A", arr, 1));
    return s.check_sat({mk_eq(mk_select(A, mk_int(0)), mk_int(1))}).sat();
  } catch (const SolverError &) {
    return false;
  }
}

Outcome criterion_arrays() {
  if (!solver_has_arrays())
    return {Outcome::Skip, "solver does not support arrays"};
  EngineLimits lim;
  lim.timeout_secs = 600;
  std::string d;
  bool ok = true;
  for (auto [file, baseline] : {std::pair{"array_insert", 102}, std::pair{"array_int_mod", 168}}) {
    const Run &r = bench(file, lim);
    std::ostringstream line;
    line << file << " ";
    if (!r.error.empty()) {
      ok = false;
      line << "error " << r.error;
    } else {
      bool good = r.v.kind == VerdictKind::Verified && r.seconds <= 600;
      ok &= good;
      line << to_string(r.v.kind) << " " << r.v.stats.iterations << " it (baseline " << baseline << ") " << std::fixed
           << std::setprecision(2) << r.seconds << " s";
    }
    d += (d.empty() ? "" : "; ") + line.str();
  }
  return ok ? pass(d) : fail(d);
}

Outcome criterion_squares_sum_composition() {
  const Run &r = bench("squares_sum");
  if (!r.error.empty() || r.v.kind != VerdictKind::Verified)
    return fail("SquaresSum did not verify");
  const ProblemFile &pf = r.pf;
  Expr c1 = r.v.f->condition(ScheduleSet::of({1}));
  Expr a_lt = testing::formula(pf, "(< (copy 1 a) (copy 2 a))");
  SolverSession s;
  Tri eq = s.is_valid(mk_implies(r.v.inv, mk_iff(c1, a_lt)));
  if (eq != Tri::True)
    return fail(std::string("inv => (C_{1} <=> a$1 < a$2) is ") + to_string(eq));
  return pass("C_{1} equals a$1 < a$2 under the invariant");
}

Outcome criterion_no_solution() {
  ProblemFile flipped = testing::load("tests/data/counter_flipped.pdsc");
  g_extra.push_back(run("counter_flipped", flipped));
  const Run &f = g_extra.back();
  if (!f.error.empty())
    return fail("counter_flipped: " + f.error);
  if (f.v.kind != VerdictKind::NoSolution || !f.v.witness ||
      f.v.witness->status != BmcResult::Status::Concrete)
    return fail("counter_flipped: no concrete witness");

  ProblemFile weak = testing::load("benchmarks/double_square_ni.pdsc");
  Expr removed = testing::formula(weak, "(= (copy 1 z) (* 2 (copy 2 z)))");
  auto &preds = *weak.predicates;
  auto it = std::find(preds.begin(), preds.end(), removed);
  if (it == preds.end())
    return fail("z$1 = 2*z$2 is not among the DoubleSquareNI predicates");
  preds.erase(it);
  g_extra.push_back(run("double_square_ni without z$1=2*z$2", weak));
  const Run &w = g_extra.back();
  if (!w.error.empty())
    return fail("weakened DoubleSquareNI: " + w.error);
  if (w.P.index_of(removed))
    return fail("weakened DoubleSquareNI still has the predicate");
  if (w.v.kind != VerdictKind::NoSolution)
    return fail(std::string("weakened DoubleSquareNI: ") + to_string(w.v.kind));
  std::ostringstream d;
  d << "flipped counter witness with " << f.v.witness->states.size() << " state(s); weakened DoubleSquareNI after "
    << w.v.stats.iterations << " iterations";
  return pass(d.str());
}

Outcome criterion_bound() {
  // The toys and the plain counter go through the engine too.
  g_extra.push_back(run("counter", testing::load("tests/data/counter.pdsc")));
  for (const auto &toy : toys())
    g_extra.push_back(run(toy.name, parse_problem(toy.text)));
  std::size_t n = 0;
  for (const Run *r : all_runs()) {
    ++n;
    if (!r->error.empty())
      return fail(r->label + ": " + r->error);
    if (static_cast<double>(r->v.stats.iterations) > r->v.stats.iteration_bound)
      return fail(r->label + ": iteration bound exceeded");
    if (r->v.kind == VerdictKind::ResourceLimit)
      return fail(r->label + ": did not finish (" + r->v.reason + ")");
  }
  return pass(std::to_string(n) + " runs within 2^|P|*(2^k-1)");
}

Outcome criterion_properties() {
  auto t0 = Clock::now();
  std::mt19937 rng(12345);
  const std::size_t cases = 1000;
  std::size_t disjoint = 0, locality = 0, roundtrip = 0, fair = 0;

  auto term_bits = [](int k) {
    TermBits tb;
    for (int j = 0; j < k; ++j)
      tb.lifted.push_back(mk_var(PredicateSet::bvar(static_cast<std::size_t>(j))));
    return tb;
  };
  auto rand_state = [&](std::size_t w) {
    return AbstractState(w, std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t(1) << w) - 1)(rng));
  };

  // Disjointness after normalize and after chains of modify, plus update locality.
  while (disjoint < cases || locality < cases) {
    int k = std::uniform_int_distribution<int>(2, 3)(rng);
    std::size_t w = std::uniform_int_distribution<std::size_t>(static_cast<std::size_t>(k), 6)(rng);
    TermBits tb = term_bits(k);
    std::map<ScheduleSet, Expr> conds;
    for (auto M : ScheduleSet::every(k))
      if (rng() % 5 < 3)
        conds[M] = random_b_formula(rng, w, 3);
    CompositionFunction f = normalize(conds, k);
    if (!is_partition(f, w))
      return fail("normalize produced overlapping or missing conditions");
    ++disjoint;
    for (int step = 0; step < 4; ++step) {
      AbstractState s = rand_state(w);
      auto M_old = f.value_of(s);
      if (!M_old)
        return fail("normalized function undefined at " + s.to_string());
      ExclusionSet E;
      E.insert(s, *M_old);
      for (auto M : ScheduleSet::every(k))
        if (rng() % 3 == 0)
          E.insert(s, M);
      for (int extra = 0; extra < 3; ++extra) {
        auto all = ScheduleSet::every(k);
        E.insert(rand_state(w), all[rng() % all.size()]);
      }
      if (admissible_values(s, E, tb).empty()) {
        bool threw = false;
        try {
          modify(f, s, *M_old, E, tb);
        } catch (const std::logic_error &) {
          threw = true;
        }
        if (!threw)
          return fail("modify without admissible values did not throw");
        continue;
      }
      ScheduleSet chosen = *M_old;
      CompositionFunction g = modify(f, s, *M_old, E, tb, &chosen);
      if (!is_partition(g, w))
        return fail("modify broke disjointness at " + s.to_string());
      ++disjoint;
      if (g.value_of(s) != chosen || E.contains(s, chosen) || is_starving(s, chosen, tb))
        return fail("modify chose an inadmissible value at " + s.to_string());
      for (const auto &t : all_states(w))
        if (t != s && g.value_of(t) != f.value_of(t))
          return fail("modify changed the value of " + t.to_string());
      ++locality;
      f = std::move(g);
    }
  }

  // lift/lower round trip over random predicate sets.
  std::vector<Expr> atoms_pool;
  for (int i = 1; i <= 2; ++i) {
    atoms_pool.push_back(mk_lt(testing::x("a", i), mk_int(static_cast<std::int64_t>(i))));
    atoms_pool.push_back(mk_ge(testing::x("b", i), testing::x("a", i)));
    atoms_pool.push_back(mk_var(Var("h", Sort::bool_sort(), i)));
    atoms_pool.push_back(mk_eq(mk_select(mk_var(Var("A", Sort::array_sort(Sort::int_sort(), Sort::int_sort()), i)),
                                         testing::x("a", i)),
                               mk_int(0)));
  }
  atoms_pool.push_back(mk_eq(testing::x("a", 1), testing::x("a", 2)));
  atoms_pool.push_back(mk_eq(testing::x("b", 1), mk_add(testing::x("b", 2), mk_int(1))));
  while (roundtrip < cases) {
    std::vector<Expr> chosen;
    for (const auto &a : atoms_pool)
      if (rng() % 2)
        chosen.push_back(a);
    if (chosen.empty())
      continue;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    PredicateSet P(chosen);
    Expr psi = random_b_formula(rng, P.size(), 3);
    Expr phi = lower(psi, P);
    if (lift(phi, P) != psi)
      return fail("lift(lower(psi)) differs for " + psi.to_wire());
    if (lower(lift(phi, P), P) != phi)
      return fail("lower(lift(phi)) differs for " + phi.to_wire());
    for (const auto &v : free_vars(phi))
      if (v.base.rfind("__", 0) == 0)
        return fail("lower left a boolean variable in " + phi.to_wire());
    ++roundtrip;
  }

  // Fairness after every modify, starting from lockstep.
  SolverSession solver;
  while (fair < cases) {
    int k = std::uniform_int_distribution<int>(2, 3)(rng);
    std::size_t w = std::uniform_int_distribution<std::size_t>(static_cast<std::size_t>(k), 5)(rng);
    TermBits tb = term_bits(k);
    CompositionFunction f = lockstep(k);
    ExclusionSet E;
    for (int step = 0; step < 6 && fair < cases; ++step) {
      AbstractState s = rand_state(w);
      ScheduleSet M_old = *f.value_of(s);
      E.insert(s, M_old);
      if (all_excluded_or_starving(s, E, tb))
        break;
      f = modify(f, s, M_old, E, tb);
      if (fairness_holds(solver, f, tb) != Tri::True)
        return fail("fairness_holds fails after modify at " + s.to_string());
      for (const auto &t : all_states(w))
        if (is_starving(t, *f.value_of(t), tb))
          return fail("starving value at " + t.to_string());
      ++fair;
    }
  }

  double secs = seconds_since(t0);
  std::ostringstream d;
  d << disjoint << " disjointness, " << locality << " locality, " << roundtrip << " round-trip, " << fair
    << " fairness cases, " << std::fixed << std::setprecision(2) << secs << " s";
  if (secs >= 30)
    return fail(d.str() + " (limit 30 s)");
  return pass(d.str());
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char *title;
    std::function<Outcome()> fn;
  };
  // Criterion 2 and 8 look at every run, so they go last.
  std::vector<Criterion> order{
      {1, "oracle equivalence on finite toys", criterion_oracle},
      {3, "lockstep is insufficient at iteration 1", criterion_lockstep},
      {4, "SquaresSum, HalfSquareNI, DoubleSquareNI verify", criterion_table},
      {5, "array benchmarks verify", criterion_arrays},
      {6, "SquaresSum schedules copy 1 exactly when a$1 < a$2", criterion_squares_sum_composition},
      {7, "NoSolution with and without a witness", criterion_no_solution},
      {9, "randomized invariant suites", criterion_properties},
      {8, "iteration bound and termination", criterion_bound},
      {2, "every verified pair passes check_pair", criterion_check_pair},
  };
  std::map<int, std::pair<std::string, Outcome>> results;
  for (const auto &c : order) {
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception &e) {
      o = fail(std::string("exception: ") + e.what());
    }
    results[c.id] = {c.title, o};
  }
  int failures = 0;
  for (const auto &[id, entry] : results) {
    const auto &[title, o] = entry;
    const char *tag = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Skip ? "SKIP" : "FAIL";
    failures += o.status == Outcome::Fail ? 1 : 0;
    std::cout << tag << "  criterion " << id << ": " << title << " -- " << o.detail << "\n";
  }
  std::cout << (failures ? "FAILED" : "OK") << " (" << failures << " failing)\n";
  return failures ? 1 : 0;
}
