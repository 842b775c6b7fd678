#include "pdsc/formula.hpp"

#include "pdsc/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

namespace pdsc {

// ---------------------------------------------------------------------------
// Sort
// ---------------------------------------------------------------------------

Sort Sort::int_sort() { return Sort(Kind::Int); }
Sort Sort::bool_sort() { return Sort(Kind::Bool); }

Sort Sort::array_sort(const Sort &index, const Sort &element) {
  Sort s(Kind::Array);
  s.index_ = std::make_shared<const Sort>(index);
  s.element_ = std::make_shared<const Sort>(element);
  return s;
}

const Sort &Sort::index() const {
  if (!is_array())
    throw SortError("index() on non-array sort");
  return *index_;
}

const Sort &Sort::element() const {
  if (!is_array())
    throw SortError("element() on non-array sort");
  return *element_;
}

std::string Sort::to_wire() const {
  switch (kind_) {
  case Kind::Int:
    return "Int";
  case Kind::Bool:
    return "Bool";
  case Kind::Array:
    return "(Array " + index_->to_wire() + " " + element_->to_wire() + ")";
  }
  return "?";
}

bool operator==(const Sort &a, const Sort &b) {
  if (a.kind_ != b.kind_)
    return false;
  if (a.kind_ != Sort::Kind::Array)
    return true;
  return *a.index_ == *b.index_ && *a.element_ == *b.element_;
}

// ---------------------------------------------------------------------------
// Var
// ---------------------------------------------------------------------------

Var::Var(std::string b, Sort s, std::optional<int> c, bool p)
    : base(std::move(b)), copy(c), primed(p), sort(std::move(s)) {}

Var Var::with_copy(int i) const {
  Var v = *this;
  v.copy = i;
  return v;
}

Var Var::with_primed(bool p) const {
  Var v = *this;
  v.primed = p;
  return v;
}

Var Var::without_copy() const {
  Var v = *this;
  v.copy.reset();
  return v;
}

std::string Var::wire_name() const {
  std::string s = base;
  if (copy)
    s += "$" + std::to_string(*copy);
  if (primed)
    s += "_next";
  return s;
}

std::string Var::display() const {
  std::string s = base;
  if (copy)
    s += "$" + std::to_string(*copy);
  if (primed)
    s += "'";
  return s;
}

bool operator<(const Var &a, const Var &b) {
  if (a.base != b.base)
    return a.base < b.base;
  if (a.copy != b.copy)
    return a.copy < b.copy;
  return a.primed < b.primed;
}

bool is_valid_identifier(const std::string &s) {
  if (s.empty())
    return false;
  auto c0 = static_cast<unsigned char>(s[0]);
  if (!(std::isalpha(c0) || s[0] == '_'))
    return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// ---------------------------------------------------------------------------
// Nodes
// ---------------------------------------------------------------------------

struct ExprNode {
  Op op;
  Sort sort = Sort::int_sort();
  std::vector<Expr> args;
  std::int64_t value = 0;
  std::optional<Var> var;
  std::size_t hash = 0;
};

namespace {

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const std::shared_ptr<const ExprNode> &true_node() {
  static const std::shared_ptr<const ExprNode> n = [] {
    auto p = std::make_shared<ExprNode>();
    p->op = Op::True;
    p->sort = Sort::bool_sort();
    p->hash = combine(0, static_cast<std::size_t>(Op::True));
    return std::shared_ptr<const ExprNode>(p);
  }();
  return n;
}

} // namespace

Expr make_node(Op op, Sort sort, std::vector<Expr> args, std::int64_t value, std::optional<Var> var) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->sort = std::move(sort);
  n->args = std::move(args);
  n->value = value;
  n->var = std::move(var);
  std::size_t h = combine(0, static_cast<std::size_t>(op));
  h = combine(h, std::hash<std::int64_t>{}(value));
  if (n->var) {
    h = combine(h, std::hash<std::string>{}(n->var->base));
    h = combine(h, std::hash<int>{}(n->var->copy.value_or(-1)));
    h = combine(h, n->var->primed ? 1 : 2);
  }
  for (const auto &a : n->args)
    h = combine(h, a.hash());
  n->hash = h;
  return Expr(std::shared_ptr<const ExprNode>(n));
}

Expr::Expr() : node_(true_node()) {}

Op Expr::op() const { return node_->op; }
const Sort &Expr::sort() const { return node_->sort; }
const std::vector<Expr> &Expr::args() const { return node_->args; }
const Var &Expr::var() const { return *node_->var; }
std::int64_t Expr::value() const { return node_->value; }
std::size_t Expr::hash() const { return node_->hash; }

bool Expr::is_atom() const {
  if (!is_bool())
    return false;
  switch (op()) {
  case Op::True:
  case Op::False:
  case Op::Not:
  case Op::And:
  case Op::Or:
  case Op::Implies:
  case Op::Iff:
    return false;
  default:
    return true;
  }
}

bool operator==(const Expr &a, const Expr &b) {
  if (a.node_ == b.node_)
    return true;
  const ExprNode &x = *a.node_;
  const ExprNode &y = *b.node_;
  if (x.hash != y.hash || x.op != y.op || x.value != y.value || x.args.size() != y.args.size())
    return false;
  if (x.var.has_value() != y.var.has_value())
    return false;
  if (x.var && !(*x.var == *y.var))
    return false;
  if (x.sort != y.sort)
    return false;
  for (std::size_t i = 0; i < x.args.size(); ++i)
    if (!(x.args[i] == y.args[i]))
      return false;
  return true;
}

namespace {

int compare(const Expr &a, const Expr &b) {
  if (a == b)
    return 0;
  if (a.op() != b.op())
    return a.op() < b.op() ? -1 : 1;
  if (a.op() == Op::IntConst || a.op() == Op::Mul) {
    if (a.value() != b.value())
      return a.value() < b.value() ? -1 : 1;
  }
  if (a.op() == Op::Variable) {
    if (a.var() < b.var())
      return -1;
    if (b.var() < a.var())
      return 1;
    return 0;
  }
  const auto &xa = a.args();
  const auto &xb = b.args();
  for (std::size_t i = 0; i < std::min(xa.size(), xb.size()); ++i) {
    int c = compare(xa[i], xb[i]);
    if (c)
      return c;
  }
  if (xa.size() != xb.size())
    return xa.size() < xb.size() ? -1 : 1;
  return 0;
}

} // namespace

bool operator<(const Expr &a, const Expr &b) { return compare(a, b) < 0; }

// ---------------------------------------------------------------------------
// Wire rendering
// ---------------------------------------------------------------------------

namespace {

const char *op_symbol(Op op) {
  switch (op) {
  case Op::Not:
    return "not";
  case Op::And:
    return "and";
  case Op::Or:
    return "or";
  case Op::Implies:
    return "=>";
  case Op::Iff:
  case Op::Eq:
    return "=";
  case Op::Lt:
    return "<";
  case Op::Le:
    return "<=";
  case Op::Gt:
    return ">";
  case Op::Ge:
    return ">=";
  case Op::Add:
    return "+";
  case Op::Sub:
  case Op::Neg:
    return "-";
  case Op::Mul:
    return "*";
  case Op::Select:
    return "select";
  case Op::Store:
    return "store";
  default:
    return "?";
  }
}

void write_int(std::ostream &os, std::int64_t v) {
  if (v < 0)
    os << "(- " << (0 - static_cast<std::uint64_t>(v)) << ")";
  else
    os << v;
}

void write_wire(std::ostream &os, const Expr &e) {
  switch (e.op()) {
  case Op::True:
    os << "true";
    return;
  case Op::False:
    os << "false";
    return;
  case Op::IntConst:
    write_int(os, e.value());
    return;
  case Op::Variable:
    os << e.var().wire_name();
    return;
  case Op::Mul:
    os << "(* ";
    write_int(os, e.value());
    os << ' ';
    write_wire(os, e.args()[0]);
    os << ')';
    return;
  default:
    break;
  }
  os << '(' << op_symbol(e.op());
  for (const auto &a : e.args()) {
    os << ' ';
    write_wire(os, a);
  }
  os << ')';
}

} // namespace

std::string Expr::to_wire() const {
  std::ostringstream os;
  write_wire(os, *this);
  return os.str();
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

namespace {

void require_bool(const Expr &e, const char *ctx) {
  if (!e.is_bool())
    throw SortError(std::string(ctx) + ": expected Bool operand, got " + e.sort().to_wire() +
                    " in " + e.to_wire());
}

void require_int(const Expr &e, const char *ctx) {
  if (!e.sort().is_int())
    throw SortError(std::string(ctx) + ": expected Int operand, got " + e.sort().to_wire() +
                    " in " + e.to_wire());
}

Expr nary_bool(Op op, std::vector<Expr> args) {
  const bool is_and = op == Op::And;
  std::vector<Expr> kept;
  kept.reserve(args.size());
  for (auto &a : args) {
    require_bool(a, is_and ? "and" : "or");
    if (a.is_true()) {
      if (is_and)
        continue;
      return mk_true();
    }
    if (a.is_false()) {
      if (!is_and)
        continue;
      return mk_false();
    }
    if (a.op() == op) {
      for (const auto &b : a.args())
        kept.push_back(b);
    } else {
      kept.push_back(std::move(a));
    }
  }
  if (kept.empty())
    return is_and ? mk_true() : mk_false();
  if (kept.size() == 1)
    return kept.front();
  return make_node(op, Sort::bool_sort(), std::move(kept), 0, std::nullopt);
}

Expr compare_atom(Op op, const Expr &a, const Expr &b, const char *ctx) {
  require_int(a, ctx);
  require_int(b, ctx);
  return make_node(op, Sort::bool_sort(), {a, b}, 0, std::nullopt);
}

} // namespace

Expr mk_true() { return Expr(); }
Expr mk_false() { return make_node(Op::False, Sort::bool_sort(), {}, 0, std::nullopt); }
Expr mk_bool(bool b) { return b ? mk_true() : mk_false(); }
Expr mk_int(std::int64_t v) { return make_node(Op::IntConst, Sort::int_sort(), {}, v, std::nullopt); }
Expr mk_var(const Var &v) { return make_node(Op::Variable, v.sort, {}, 0, v); }

Expr mk_not(const Expr &a) {
  require_bool(a, "not");
  if (a.is_true())
    return mk_false();
  if (a.is_false())
    return mk_true();
  return make_node(Op::Not, Sort::bool_sort(), {a}, 0, std::nullopt);
}

Expr mk_and(std::vector<Expr> args) { return nary_bool(Op::And, std::move(args)); }
Expr mk_and(const Expr &a, const Expr &b) { return mk_and(std::vector<Expr>{a, b}); }
Expr mk_or(std::vector<Expr> args) { return nary_bool(Op::Or, std::move(args)); }
Expr mk_or(const Expr &a, const Expr &b) { return mk_or(std::vector<Expr>{a, b}); }

Expr mk_implies(const Expr &a, const Expr &b) {
  require_bool(a, "=>");
  require_bool(b, "=>");
  if (a.is_false() || b.is_true())
    return mk_true();
  if (a.is_true())
    return b;
  if (b.is_false())
    return mk_not(a);
  return make_node(Op::Implies, Sort::bool_sort(), {a, b}, 0, std::nullopt);
}

Expr mk_iff(const Expr &a, const Expr &b) {
  require_bool(a, "iff");
  require_bool(b, "iff");
  if (a.is_true())
    return b;
  if (b.is_true())
    return a;
  if (a.is_false())
    return mk_not(b);
  if (b.is_false())
    return mk_not(a);
  return make_node(Op::Iff, Sort::bool_sort(), {a, b}, 0, std::nullopt);
}

Expr mk_eq(const Expr &a, const Expr &b) {
  if (a.sort() != b.sort())
    throw SortError("=: operand sorts differ: " + a.sort().to_wire() + " vs " + b.sort().to_wire());
  if (a.is_bool())
    return mk_iff(a, b);
  return make_node(Op::Eq, Sort::bool_sort(), {a, b}, 0, std::nullopt);
}

Expr mk_lt(const Expr &a, const Expr &b) { return compare_atom(Op::Lt, a, b, "<"); }
Expr mk_le(const Expr &a, const Expr &b) { return compare_atom(Op::Le, a, b, "<="); }
Expr mk_gt(const Expr &a, const Expr &b) { return compare_atom(Op::Gt, a, b, ">"); }
Expr mk_ge(const Expr &a, const Expr &b) { return compare_atom(Op::Ge, a, b, ">="); }

Expr mk_add(std::vector<Expr> args) {
  for (const auto &a : args)
    require_int(a, "+");
  if (args.empty())
    return mk_int(0);
  if (args.size() == 1)
    return args.front();
  return make_node(Op::Add, Sort::int_sort(), std::move(args), 0, std::nullopt);
}

Expr mk_add(const Expr &a, const Expr &b) { return mk_add(std::vector<Expr>{a, b}); }

Expr mk_sub(const Expr &a, const Expr &b) {
  require_int(a, "-");
  require_int(b, "-");
  return make_node(Op::Sub, Sort::int_sort(), {a, b}, 0, std::nullopt);
}

Expr mk_neg(const Expr &a) {
  require_int(a, "-");
  if (a.op() == Op::IntConst && a.value() > 0)
    return mk_int(-a.value());
  return make_node(Op::Neg, Sort::int_sort(), {a}, 0, std::nullopt);
}

Expr mk_mul(std::int64_t factor, const Expr &a) {
  require_int(a, "*");
  return make_node(Op::Mul, Sort::int_sort(), {a}, factor, std::nullopt);
}

Expr mk_select(const Expr &array, const Expr &index) {
  if (!array.sort().is_array())
    throw SortError("select: first operand is not an array: " + array.to_wire());
  if (array.sort().index() != index.sort())
    throw SortError("select: index sort mismatch in " + array.to_wire());
  return make_node(Op::Select, array.sort().element(), {array, index}, 0, std::nullopt);
}

Expr mk_store(const Expr &array, const Expr &index, const Expr &value) {
  if (!array.sort().is_array())
    throw SortError("store: first operand is not an array: " + array.to_wire());
  if (array.sort().index() != index.sort() || array.sort().element() != value.sort())
    throw SortError("store: operand sort mismatch in " + array.to_wire());
  return make_node(Op::Store, array.sort(), {array, index, value}, 0, std::nullopt);
}

namespace {

Expr rebuild(const Expr &e, std::vector<Expr> args) {
  switch (e.op()) {
  case Op::True:
  case Op::False:
  case Op::IntConst:
  case Op::Variable:
    return e;
  case Op::Not:
    return mk_not(args[0]);
  case Op::And:
    return mk_and(std::move(args));
  case Op::Or:
    return mk_or(std::move(args));
  case Op::Implies:
    return mk_implies(args[0], args[1]);
  case Op::Iff:
    return mk_iff(args[0], args[1]);
  case Op::Eq:
    return mk_eq(args[0], args[1]);
  case Op::Lt:
    return mk_lt(args[0], args[1]);
  case Op::Le:
    return mk_le(args[0], args[1]);
  case Op::Gt:
    return mk_gt(args[0], args[1]);
  case Op::Ge:
    return mk_ge(args[0], args[1]);
  case Op::Add:
    return mk_add(std::move(args));
  case Op::Sub:
    return mk_sub(args[0], args[1]);
  case Op::Neg:
    return mk_neg(args[0]);
  case Op::Mul:
    return mk_mul(e.value(), args[0]);
  case Op::Select:
    return mk_select(args[0], args[1]);
  case Op::Store:
    return mk_store(args[0], args[1], args[2]);
  }
  return e;
}

} // namespace

// ---------------------------------------------------------------------------
// Renaming algebra
// ---------------------------------------------------------------------------

namespace {

void collect_vars(const Expr &f, std::set<Var> &out) {
  if (f.op() == Op::Variable) {
    out.insert(f.var());
    return;
  }
  for (const auto &a : f.args())
    collect_vars(a, out);
}

} // namespace

std::set<Var> free_vars(const Expr &f) {
  std::set<Var> out;
  collect_vars(f, out);
  return out;
}

Expr map_vars(const Expr &f, const std::function<Expr(const Var &)> &fn) {
  std::unordered_map<const void *, Expr> memo;
  std::function<Expr(const Expr &)> go = [&](const Expr &e) -> Expr {
    if (e.op() == Op::Variable)
      return fn(e.var());
    if (e.args().empty())
      return e;
    std::vector<Expr> args;
    args.reserve(e.args().size());
    bool changed = false;
    for (const auto &a : e.args()) {
      args.push_back(go(a));
      changed = changed || !(args.back() == a);
    }
    if (!changed)
      return e;
    return rebuild(e, std::move(args));
  };
  return go(f);
}

Expr rename_copy(const Expr &f, int i) {
  return map_vars(f, [i](const Var &v) {
    if (v.copy)
      throw SortError("rename_copy: variable " + v.display() + " already carries a copy index");
    return mk_var(v.with_copy(i));
  });
}

Expr prime(const Expr &f) {
  return map_vars(f, [](const Var &v) {
    if (v.primed)
      throw SortError("prime: variable " + v.display() + " is already primed");
    return mk_var(v.with_primed(true));
  });
}

Expr substitute(const Expr &f, const std::map<Var, Expr> &map) {
  for (const auto &[v, t] : map)
    if (v.sort != t.sort())
      throw SortError("substitute: " + v.display() + " : " + v.sort.to_wire() + " mapped to term of sort " +
                      t.sort().to_wire());
  if (map.empty())
    return f;
  return map_vars(f, [&](const Var &v) {
    auto it = map.find(v);
    return it == map.end() ? mk_var(v) : it->second;
  });
}

std::vector<Expr> atoms_of(const Expr &f) {
  std::vector<Expr> out;
  std::unordered_map<Expr, bool, ExprHash> seen;
  std::function<void(const Expr &)> go = [&](const Expr &e) {
    if (e.is_atom()) {
      if (seen.emplace(e, true).second)
        out.push_back(e);
      return;
    }
    if (!e.is_bool())
      return;
    for (const auto &a : e.args())
      go(a);
  };
  go(f);
  return out;
}

bool eval_bool(const Expr &f, const std::function<bool(const Var &)> &value) {
  switch (f.op()) {
  case Op::True:
    return true;
  case Op::False:
    return false;
  case Op::Variable:
    if (!f.is_bool())
      throw SortError("eval_bool: non-boolean variable " + f.var().display());
    return value(f.var());
  case Op::Not:
    return !eval_bool(f.args()[0], value);
  case Op::And:
    for (const auto &a : f.args())
      if (!eval_bool(a, value))
        return false;
    return true;
  case Op::Or:
    for (const auto &a : f.args())
      if (eval_bool(a, value))
        return true;
    return false;
  case Op::Implies:
    return !eval_bool(f.args()[0], value) || eval_bool(f.args()[1], value);
  case Op::Iff:
    return eval_bool(f.args()[0], value) == eval_bool(f.args()[1], value);
  default:
    throw SortError("eval_bool: not a pure boolean formula: " + f.to_wire());
  }
}

// ---------------------------------------------------------------------------
// Wire parser
// ---------------------------------------------------------------------------

namespace {

struct WireParser {
  const std::function<std::optional<Sort>(const std::string &)> &base_sort;

  Var symbol_var(const SExpr &s) const {
    std::string name = s.atom;
    bool primed = false;
    const std::string suffix = "_next";
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      primed = true;
      name.resize(name.size() - suffix.size());
    }
    std::optional<int> copy;
    auto dollar = name.rfind('$');
    if (dollar != std::string::npos) {
      std::string digits = name.substr(dollar + 1);
      if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
        s.fail("malformed copy suffix in symbol '" + s.atom + "'");
      copy = std::stoi(digits);
      name.resize(dollar);
    }
    auto sort = base_sort(name);
    if (!sort)
      s.fail("unknown symbol '" + s.atom + "'");
    return Var(name, *sort, copy, primed);
  }

  static bool is_number(const std::string &a) {
    return !a.empty() && std::all_of(a.begin(), a.end(), ::isdigit);
  }

  Expr parse(const SExpr &s) const {
    if (s.is_atom()) {
      if (s.atom == "true")
        return mk_true();
      if (s.atom == "false")
        return mk_false();
      if (is_number(s.atom))
        return mk_int(std::stoll(s.atom));
      return mk_var(symbol_var(s));
    }
    const std::string &h = s.head();
    if (h.empty())
      s.fail("expected operator application");
    std::vector<Expr> args;
    if (h == "*") {
      if (s.items.size() != 3)
        s.fail("'*' expects two operands");
      Expr c = parse(s.items[1]);
      Expr t = parse(s.items[2]);
      if (c.op() != Op::IntConst)
        std::swap(c, t);
      if (c.op() != Op::IntConst)
        s.fail("nonlinear multiplication is not supported");
      return mk_mul(c.value(), t);
    }
    for (std::size_t i = 1; i < s.items.size(); ++i)
      args.push_back(parse(s.items[i]));
    auto arity = [&](std::size_t n) {
      if (args.size() != n)
        s.fail("'" + h + "' expects " + std::to_string(n) + " operands");
    };
    try {
      if (h == "not") {
        arity(1);
        return mk_not(args[0]);
      }
      if (h == "and")
        return mk_and(std::move(args));
      if (h == "or")
        return mk_or(std::move(args));
      if (h == "=>") {
        arity(2);
        return mk_implies(args[0], args[1]);
      }
      if (h == "=") {
        arity(2);
        return mk_eq(args[0], args[1]);
      }
      if (h == "distinct") {
        arity(2);
        return mk_not(mk_eq(args[0], args[1]));
      }
      if (h == "<") {
        arity(2);
        return mk_lt(args[0], args[1]);
      }
      if (h == "<=") {
        arity(2);
        return mk_le(args[0], args[1]);
      }
      if (h == ">") {
        arity(2);
        return mk_gt(args[0], args[1]);
      }
      if (h == ">=") {
        arity(2);
        return mk_ge(args[0], args[1]);
      }
      if (h == "+")
        return mk_add(std::move(args));
      if (h == "-") {
        if (args.size() == 1)
          return mk_neg(args[0]);
        arity(2);
        return mk_sub(args[0], args[1]);
      }
      if (h == "select") {
        arity(2);
        return mk_select(args[0], args[1]);
      }
      if (h == "store") {
        arity(3);
        return mk_store(args[0], args[1], args[2]);
      }
    } catch (const SortError &e) {
      s.fail(e.what());
    }
    s.fail("unknown operator '" + h + "'");
  }
};

} // namespace

Expr parse_wire(const std::string &text,
                const std::function<std::optional<Sort>(const std::string &base)> &base_sort) {
  WireParser p{base_sort};
  return p.parse(parse_sexpr(text));
}

} // namespace pdsc
