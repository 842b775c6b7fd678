#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdsc {

class SortError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Sort
// ---------------------------------------------------------------------------

class Sort {
public:
  enum class Kind { Int, Bool, Array };

  static Sort int_sort();
  static Sort bool_sort();
  static Sort array_sort(const Sort &index, const Sort &element);

  Kind kind() const { return kind_; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_array() const { return kind_ == Kind::Array; }
  const Sort &index() const;
  const Sort &element() const;

  /// SMT-LIB2 rendering: `Int`, `Bool`, `(Array Int Int)`.
  std::string to_wire() const;

  friend bool operator==(const Sort &a, const Sort &b);
  friend bool operator!=(const Sort &a, const Sort &b) { return !(a == b); }

private:
  explicit Sort(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Int;
  std::shared_ptr<const Sort> index_;
  std::shared_ptr<const Sort> element_;
};

// ---------------------------------------------------------------------------
// Var
// ---------------------------------------------------------------------------

/// A program variable, optionally tagged with a copy index (1..k) and primed.
/// Identity is (base, copy, primed); the sort rides along.
struct Var {
  std::string base;
  std::optional<int> copy;
  bool primed = false;
  Sort sort = Sort::int_sort();

  Var() = default;
  Var(std::string b, Sort s, std::optional<int> c = std::nullopt, bool p = false);

  Var with_copy(int i) const;
  Var with_primed(bool p = true) const;
  Var without_copy() const;

  /// `base` + (`$<copy>`) + (`_next`).
  std::string wire_name() const;
  /// Human form: x$1' etc.
  std::string display() const;

  friend bool operator==(const Var &a, const Var &b) {
    return a.base == b.base && a.copy == b.copy && a.primed == b.primed;
  }
  friend bool operator!=(const Var &a, const Var &b) { return !(a == b); }
  friend bool operator<(const Var &a, const Var &b);
};

bool is_valid_identifier(const std::string &s);

// ---------------------------------------------------------------------------
// Expr
// ---------------------------------------------------------------------------

enum class Op {
  True,
  False,
  IntConst,
  Variable,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Eq,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub,
  Neg,
  Mul, // constant * term
  Select,
  Store,
};

struct ExprNode;

/// Immutable, hash-consed-by-value formula/term handle.  Copies share nodes.
class Expr {
public:
  Expr(); // `true`

  Op op() const;
  const Sort &sort() const;
  const std::vector<Expr> &args() const;
  const Var &var() const;       // Op::Variable only
  std::int64_t value() const;   // Op::IntConst and the factor of Op::Mul
  std::size_t hash() const;

  bool is_true() const { return op() == Op::True; }
  bool is_false() const { return op() == Op::False; }
  bool is_bool() const { return sort().is_bool(); }
  bool is_atom() const;

  std::string to_wire() const;

  friend bool operator==(const Expr &a, const Expr &b);
  friend bool operator!=(const Expr &a, const Expr &b) { return !(a == b); }
  /// Structural total order (used for deterministic containers).
  friend bool operator<(const Expr &a, const Expr &b);

private:
  friend Expr make_node(Op, Sort, std::vector<Expr>, std::int64_t, std::optional<Var>);
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprHash {
  std::size_t operator()(const Expr &e) const { return e.hash(); }
};

// Builders.  All of them sort-check and throw SortError on mismatch.
// Boolean connectives fold constants; nothing else is simplified.
Expr mk_true();
Expr mk_false();
Expr mk_bool(bool b);
Expr mk_int(std::int64_t v);
Expr mk_var(const Var &v);
Expr mk_not(const Expr &a);
Expr mk_and(std::vector<Expr> args);
Expr mk_and(const Expr &a, const Expr &b);
Expr mk_or(std::vector<Expr> args);
Expr mk_or(const Expr &a, const Expr &b);
Expr mk_implies(const Expr &a, const Expr &b);
Expr mk_iff(const Expr &a, const Expr &b);
Expr mk_eq(const Expr &a, const Expr &b); // Bool operands become mk_iff
Expr mk_lt(const Expr &a, const Expr &b);
Expr mk_le(const Expr &a, const Expr &b);
Expr mk_gt(const Expr &a, const Expr &b);
Expr mk_ge(const Expr &a, const Expr &b);
Expr mk_add(std::vector<Expr> args);
Expr mk_add(const Expr &a, const Expr &b);
Expr mk_sub(const Expr &a, const Expr &b);
Expr mk_neg(const Expr &a);
Expr mk_mul(std::int64_t factor, const Expr &a);
Expr mk_select(const Expr &array, const Expr &index);
Expr mk_store(const Expr &array, const Expr &index, const Expr &value);

// ---------------------------------------------------------------------------
// Renaming algebra
// ---------------------------------------------------------------------------

std::set<Var> free_vars(const Expr &f);

/// Tags every variable with copy `i`.  Throws SortError if a variable already
/// carries a copy index.
Expr rename_copy(const Expr &f, int i);

/// Primes every variable.  Throws SortError if a variable is already primed.
Expr prime(const Expr &f);

/// Simultaneous substitution.  Throws SortError on sort mismatch.
Expr substitute(const Expr &f, const std::map<Var, Expr> &map);

/// Bottom-up rewrite of variable leaves; the callback returns the replacement.
Expr map_vars(const Expr &f, const std::function<Expr(const Var &)> &fn);

/// Collects atoms (non-connective boolean subformulas) in first-occurrence order.
std::vector<Expr> atoms_of(const Expr &f);

/// Evaluates a pure boolean formula whose leaves are boolean variables.
bool eval_bool(const Expr &f, const std::function<bool(const Var &)> &value);

/// Parses the wire format produced by Expr::to_wire.  Variable symbols are
/// resolved through `lookup` (given the symbol's base/copy/primed decomposition).
Expr parse_wire(const std::string &text,
                const std::function<std::optional<Sort>(const std::string &base)> &base_sort);

} // namespace pdsc

template <> struct std::hash<pdsc::Expr> {
  std::size_t operator()(const pdsc::Expr &e) const { return e.hash(); }
};
