#pragma once

#include "pdsc/formula.hpp"
#include "pdsc/sexpr.hpp"
#include "pdsc/system.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdsc {

/// Unreadable or malformed problem file; the message carries path and position.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parsed `.pdsc` file.
struct ProblemFile {
  TransitionSystem system;
  KSafetyProperty property;
  std::optional<std::vector<Expr>> predicates;
  std::map<std::string, std::string> options;

  std::string option(const std::string &key, const std::string &fallback = "") const;
};

/// Throws ParseError with the position of the offending form.
ProblemFile parse_problem(const std::string &text);
/// Throws InputError.
ProblemFile load_problem(const std::string &path);

/// Parses one formula in the input syntax.  Plain symbols are system
/// variables; `(next v)` is allowed when `allow_next`; `(copy i v)` is allowed
/// when `k` is given and then plain symbols are rejected.
Expr parse_formula(const SExpr &e, const std::vector<Var> &vars, bool allow_next, std::optional<int> k);

} // namespace pdsc
