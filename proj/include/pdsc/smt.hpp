#pragma once

#include "pdsc/formula.hpp"
#include "pdsc/sexpr.hpp"

#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pdsc {

/// Solver crashed, replied with an error, or said something unparseable.
class SolverError : public std::runtime_error {
public:
  SolverError(const std::string &msg, std::string transcript)
      : std::runtime_error(msg), transcript_(std::move(transcript)) {}
  const std::string &transcript() const { return transcript_; }

private:
  std::string transcript_;
};

/// A search or enumeration exceeded a configured cap, or the solver gave up
/// (unknown) outside a validity check.
class ResourceLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Tri { True, False, Unknown };

const char *to_string(Tri t);

enum class SatStatus { Sat, Unsat, Unknown };

const char *to_string(SatStatus s);

/// Model values are kept as the solver's s-expression text; helpers decode the
/// scalar sorts.
struct SatResult {
  SatStatus status = SatStatus::Unknown;
  std::map<Var, std::string> model;
  std::string reason;

  bool sat() const { return status == SatStatus::Sat; }
  bool unsat() const { return status == SatStatus::Unsat; }
  bool get_bool(const Var &v) const;
  std::int64_t get_int(const Var &v) const;
};

/// Decodes `true`/`false`, integer literals and `(- n)`.
bool decode_bool(const SExpr &e);
std::int64_t decode_int(const SExpr &e);

/// Resolves the solver command: explicit flag, then $PDSC_SOLVER, then `z3 -in`.
std::string default_solver_command(const std::optional<std::string> &flag = std::nullopt);

/// One child solver process speaking SMT-LIB2 over stdin/stdout.
class SolverSession {
public:
  explicit SolverSession(std::string command = default_solver_command(), std::string logic = "ALL",
                         std::optional<std::string> log_path = std::nullopt);
  ~SolverSession();
  SolverSession(const SolverSession &) = delete;
  SolverSession &operator=(const SolverSession &) = delete;

  const std::string &command() const { return command_; }
  bool live() const { return pid_ > 0; }
  int depth() const { return static_cast<int>(scopes_.size()) - 1; }
  std::size_t queries() const { return queries_; }

  void push();
  void pop();
  /// Declares every free variable of `f` that is not yet visible, then asserts it.
  void add(const Expr &f);
  void declare(const Var &v);

  SatStatus check();
  /// Values for the given variables in the last Sat model.
  std::map<Var, std::string> values(const std::vector<Var> &vars);
  /// Raw values for arbitrary terms in the last Sat model.
  std::vector<SExpr> term_values(const std::vector<Expr> &terms);
  std::string reason_unknown();

  /// Checks the conjunction in a fresh scope and returns values for `want`
  /// (defaults to all free variables of the assertions).
  SatResult check_sat(const std::vector<Expr> &assertions, std::optional<std::vector<Var>> want = std::nullopt);
  Tri is_valid(const Expr &f);

  /// Every assignment to `proj` consistent with `f` (and the current context).
  std::vector<std::vector<bool>> all_models(const Expr &f, const std::vector<Var> &proj,
                                            std::size_t cap = std::size_t(1) << 20);
  /// Same, but over whatever is already asserted in the current scope.
  std::vector<std::vector<bool>> enumerate(const std::vector<Var> &proj, std::size_t cap = std::size_t(1) << 20);

  void close();

private:
  std::string send(const std::string &cmd);
  void expect_success(const std::string &cmd);
  std::string read_response();
  int read_char();
  void log_line(const std::string &s);
  [[noreturn]] void fail(const std::string &msg);
  std::string transcript_tail() const;

  std::string command_;
  std::string logic_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buf_;
  std::size_t buf_pos_ = 0;
  std::vector<std::set<std::string>> scopes_; // declared symbols per level
  std::map<std::string, Sort> declared_sorts_;
  std::unique_ptr<std::ofstream> log_;
  std::deque<std::string> recent_;
  std::size_t queries_ = 0;
};

} // namespace pdsc
