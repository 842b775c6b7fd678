#pragma once

#include "pdsc/formula.hpp"
#include "pdsc/smt.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace pdsc {

/// (V, R, F) over copy-free variables.  R mentions V and V'.
struct TransitionSystem {
  std::vector<Var> vars;
  Expr trans;
  Expr terminal;

  /// Throws std::invalid_argument when a formula strays outside its vocabulary.
  void validate() const;
  /// Terminal condition of copy i.
  Expr terminal_of(int copy) const { return rename_copy(terminal, copy); }
  /// All copy-indexed unprimed variables V^1..V^k.
  std::vector<Var> composed_vars(int k) const;
};

struct KSafetyProperty {
  int k = 2;
  Expr pre;
  Expr post;

  void validate(const TransitionSystem &ts) const;
};

/// Ordered, duplicate-free predicate list with its boolean variable images.
class PredicateSet {
public:
  PredicateSet() = default;
  explicit PredicateSet(const std::vector<Expr> &preds);

  /// Appends `p` unless structurally present.  Returns true when added.
  bool add(const Expr &p);
  std::size_t size() const { return preds_.size(); }
  bool empty() const { return preds_.empty(); }
  const std::vector<Expr> &preds() const { return preds_; }
  const Expr &operator[](std::size_t i) const { return preds_[i]; }
  std::optional<std::size_t> index_of(const Expr &p) const;

  /// `__b<i>` and its primed twin.
  static Var bvar(std::size_t i, bool primed = false);
  std::vector<Var> bvars(bool primed = false) const;

private:
  std::vector<Expr> preds_;
  std::unordered_map<Expr, std::size_t, ExprHash> index_;
};

struct WellformedReport {
  Tri terminal_stutters = Tri::Unknown; // F ∧ R ⇒ V = V'
  Tri self_loop = Tri::Unknown;         // F ⇒ R[V' := V]
  bool ok() const { return terminal_stutters == Tri::True && self_loop == Tri::True; }
  bool undetermined() const { return terminal_stutters == Tri::Unknown || self_loop == Tri::Unknown; }
};

WellformedReport check_wellformed(SolverSession &s, const TransitionSystem &ts);

struct AdequacyResult {
  Tri adequate = Tri::Unknown;
  /// Bitstring (predicate order) of an abstract state split by the formula.
  std::optional<std::string> splitting_state;
};

AdequacyResult check_adequacy(SolverSession &s, const Expr &f, const PredicateSet &P);

/// Atoms of pre/post, copy equalities for integer variables that feed the
/// control flow, and the terminal atoms of every copy.
PredicateSet mine_predicates(const TransitionSystem &ts, const KSafetyProperty &prop);

/// Mined predicates first, then the user's, deduplicated.
PredicateSet merge_predicates(const PredicateSet &mined, const std::vector<Expr> &user);

} // namespace pdsc
