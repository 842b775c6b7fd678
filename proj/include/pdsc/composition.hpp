#pragma once

#include "pdsc/formula.hpp"
#include "pdsc/smt.hpp"
#include "pdsc/system.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pdsc {

/// Broken engine invariant (disjointness, undefined schedule, failed re-check).
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// ScheduleSet
// ---------------------------------------------------------------------------

/// Nonempty set of copies, bit j-1 standing for copy j.
class ScheduleSet {
public:
  explicit ScheduleSet(std::uint32_t mask);
  static ScheduleSet all(int k);
  static ScheduleSet of(std::initializer_list<int> copies);
  /// Every nonempty subset of {1..k}, ascending by mask.
  static std::vector<ScheduleSet> every(int k);

  std::uint32_t mask() const { return mask_; }
  bool contains(int copy) const { return (mask_ >> (copy - 1)) & 1U; }
  int size() const;
  std::vector<int> members() const;
  /// `{1,2}`
  std::string to_string() const;

  friend bool operator==(ScheduleSet a, ScheduleSet b) { return a.mask_ == b.mask_; }
  friend bool operator!=(ScheduleSet a, ScheduleSet b) { return a.mask_ != b.mask_; }
  friend bool operator<(ScheduleSet a, ScheduleSet b) { return a.mask_ < b.mask_; }

private:
  std::uint32_t mask_;
};

// ---------------------------------------------------------------------------
// AbstractState
// ---------------------------------------------------------------------------

/// Total valuation of the predicates; bit i is b_i.  At most 64 predicates.
class AbstractState {
public:
  static constexpr std::size_t max_width = 64;

  AbstractState() = default;
  AbstractState(std::size_t width, std::uint64_t bits);
  static AbstractState from_bools(const std::vector<bool> &v);
  /// Parses a bitstring, predicate 0 first.
  static AbstractState parse(const std::string &s);

  std::size_t width() const { return width_; }
  std::uint64_t bits() const { return bits_; }
  bool get(std::size_t i) const { return (bits_ >> i) & 1U; }
  /// Predicate 0 first: `100` means only p0 holds.
  std::string to_string() const;

  friend bool operator==(const AbstractState &a, const AbstractState &b) {
    return a.width_ == b.width_ && a.bits_ == b.bits_;
  }
  friend bool operator!=(const AbstractState &a, const AbstractState &b) { return !(a == b); }
  friend bool operator<(const AbstractState &a, const AbstractState &b) {
    return a.width_ != b.width_ ? a.width_ < b.width_ : a.bits_ < b.bits_;
  }

private:
  std::size_t width_ = 0;
  std::uint64_t bits_ = 0;
};

struct AbstractStateHash {
  std::size_t operator()(const AbstractState &s) const {
    return std::hash<std::uint64_t>{}(s.bits() * 0x9e3779b97f4a7c15ULL + s.width());
  }
};

/// Evaluates a formula over B on an abstract state.
bool eval_on(const Expr &lifted, const AbstractState &s);

/// ⌈ŝ⌉ as a cube over B (primed or not).
Expr bool_cube(const AbstractState &s, bool primed = false);

// ---------------------------------------------------------------------------
// Terminal bits and exclusions
// ---------------------------------------------------------------------------

/// Per-copy ⌈F^i⌉, index i-1.
struct TermBits {
  std::vector<Expr> lifted;

  int k() const { return static_cast<int>(lifted.size()); }
  bool terminal(const AbstractState &s, int copy) const { return eval_on(lifted[copy - 1], s); }
  bool all_terminal(const AbstractState &s) const;
};

bool is_starving(const AbstractState &s, ScheduleSet M, const TermBits &tb);

class ExclusionSet {
public:
  /// Returns false when already present.
  bool insert(const AbstractState &s, ScheduleSet M);
  bool contains(const AbstractState &s, ScheduleSet M) const;
  std::size_t size() const { return order_.size(); }
  const std::vector<std::pair<AbstractState, ScheduleSet>> &entries() const { return order_; }

private:
  std::vector<std::pair<AbstractState, ScheduleSet>> order_;
  std::set<std::pair<AbstractState, ScheduleSet>> set_;
};

bool all_excluded_or_starving(const AbstractState &s, const ExclusionSet &E, const TermBits &tb);

/// Admissible replacement values for ŝ, best first: larger |M|, then smaller mask.
std::vector<ScheduleSet> admissible_values(const AbstractState &s, const ExclusionSet &E, const TermBits &tb);

// ---------------------------------------------------------------------------
// CompositionFunction
// ---------------------------------------------------------------------------

/// C_M for each nonempty M; missing entries are false.  The engine keeps the
/// conditions over B; lower() turns them into formulas over the program.
class CompositionFunction {
public:
  explicit CompositionFunction(int k);

  int k() const { return k_; }
  const std::map<ScheduleSet, Expr> &conditions() const { return conds_; }
  Expr condition(ScheduleSet M) const;
  void set_condition(ScheduleSet M, const Expr &c);

  /// Applies `fn` to every condition (e.g. lift/lower); drops the value cache.
  CompositionFunction mapped(const std::function<Expr(const Expr &)> &fn) const;

  /// The unique M with ŝ ⊨ C_M, nullopt if none.  Throws InternalError on overlap.
  std::optional<ScheduleSet> value_of(const AbstractState &s) const;

  /// Updates the two conditions so that ŝ moves from M_old to M_new.
  void reassign(const AbstractState &s, ScheduleSet M_old, ScheduleSet M_new);

private:
  int k_;
  std::map<ScheduleSet, Expr> conds_;
  mutable std::unordered_map<AbstractState, std::optional<ScheduleSet>, AbstractStateHash> cache_;
};

CompositionFunction lockstep(int k);

/// Copy 1 runs to termination, then copy 2, and so on.  `terminal` is copy-free.
CompositionFunction sequential(int k, const Expr &terminal);

/// ∨_M (C_M ∧ φ_M); the conditions must be over the program variables.
Expr compose_transition(const TransitionSystem &ts, const CompositionFunction &f);

/// φ_M: scheduled copies step, the rest keep their values.
Expr phi(const TransitionSystem &ts, int k, ScheduleSet M);

/// One repair step.  Throws std::logic_error when no admissible M_new exists.
CompositionFunction modify(const CompositionFunction &f, const AbstractState &s, ScheduleSet M_old,
                           const ExclusionSet &E, const TermBits &tb, ScheduleSet *chosen = nullptr);

/// Turns arbitrary conditions into a covering partition.
CompositionFunction normalize(const std::map<ScheduleSet, Expr> &conds, int k);

/// Fairness condition S3 for every M with a non-false condition (over B).
Tri fairness_holds(SolverSession &s, const CompositionFunction &f, const TermBits &tb);

/// Pairwise unsatisfiability of the conditions.
Tri conditions_disjoint(SolverSession &s, const CompositionFunction &f);

/// `if (c) step(1) else ...` rendering over program-level conditions.
std::string render_pseudocode(const CompositionFunction &f);

} // namespace pdsc
