#include "pdsc/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace pdsc {

ParseError::ParseError(const std::string &msg, int line, int col)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
      line_(line), col_(col) {}

const std::string &SExpr::head() const {
  static const std::string empty;
  if (!is_list || items.empty() || items.front().is_list)
    return empty;
  return items.front().atom;
}

std::string SExpr::to_string() const {
  if (!is_list)
    return atom;
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i)
      out += ' ';
    out += items[i].to_string();
  }
  return out + ")";
}

void SExpr::fail(const std::string &msg) const { throw ParseError(msg, line, col); }

namespace {

class Reader {
public:
  explicit Reader(const std::string &text) : text_(text) {}

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of input", line_, col_);
    SExpr e;
    e.line = line_;
    e.col = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      e.is_list = true;
      for (;;) {
        skip_ws();
        if (pos_ >= text_.size())
          throw ParseError("unbalanced '('", e.line, e.col);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    if (c == ')')
      throw ParseError("unexpected ')'", line_, col_);
    if (c == '|') {
      // quoted symbol
      advance();
      while (pos_ < text_.size() && text_[pos_] != '|') {
        e.atom += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size())
        throw ParseError("unterminated quoted symbol", e.line, e.col);
      advance();
      return e;
    }
    if (c == '"') {
      e.atom += c;
      advance();
      while (pos_ < text_.size() && text_[pos_] != '"') {
        e.atom += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size())
        throw ParseError("unterminated string", e.line, e.col);
      e.atom += '"';
      advance();
      return e;
    }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';')
        break;
      e.atom += d;
      advance();
    }
    return e;
  }

private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n')
          advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string &text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

} // namespace

std::vector<SExpr> parse_sexprs(const std::string &text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.at_end())
    out.push_back(r.read());
  return out;
}

SExpr parse_sexpr(const std::string &text) {
  Reader r(text);
  SExpr e = r.read();
  if (!r.at_end())
    throw ParseError("trailing input after s-expression", e.line, e.col);
  return e;
}

} // namespace pdsc
