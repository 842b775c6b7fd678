#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pdsc {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &msg, int line, int col);
  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_;
  int col_;
};

/// Minimal s-expression tree with source positions.  `;` starts a comment.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;
  int col = 0;

  bool is_atom() const { return !is_list; }
  bool is_symbol(const std::string &s) const { return !is_list && atom == s; }
  /// The head symbol of a list, or "" when the list is empty or headed by a list.
  const std::string &head() const;
  std::string to_string() const;

  [[noreturn]] void fail(const std::string &msg) const;
};

/// Parses every top-level s-expression in `text`.
std::vector<SExpr> parse_sexprs(const std::string &text);

/// Parses exactly one s-expression.
SExpr parse_sexpr(const std::string &text);

} // namespace pdsc
