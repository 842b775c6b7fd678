#include "pdsc/problem.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace pdsc {

std::string ProblemFile::option(const std::string &key, const std::string &fallback) const {
  auto it = options.find(key);
  return it == options.end() ? fallback : it->second;
}

namespace {

Sort parse_sort(const SExpr &e) {
  if (e.is_symbol("Int"))
    return Sort::int_sort();
  if (e.is_symbol("Bool"))
    return Sort::bool_sort();
  if (e.head() == "Array" && e.items.size() == 3)
    return Sort::array_sort(parse_sort(e.items[1]), parse_sort(e.items[2]));
  e.fail("unknown sort " + e.to_string());
}

bool is_integer_literal(const std::string &a) {
  if (a.empty())
    return false;
  for (char c : a)
    if (c < '0' || c > '9')
      return false;
  return true;
}

struct FormulaReader {
  const std::vector<Var> &vars;
  bool allow_next;
  std::optional<int> k;

  Var lookup(const SExpr &sym) const {
    if (!sym.is_atom())
      sym.fail("expected a variable name, got " + sym.to_string());
    for (const auto &v : vars)
      if (v.base == sym.atom)
        return v;
    sym.fail("undeclared variable '" + sym.atom + "'");
  }

  Expr read(const SExpr &e) const {
    if (e.is_atom()) {
      if (e.atom == "true")
        return mk_true();
      if (e.atom == "false")
        return mk_false();
      if (is_integer_literal(e.atom)) {
        try {
          return mk_int(std::stoll(e.atom));
        } catch (const std::out_of_range &) {
          e.fail("integer literal out of range: " + e.atom);
        }
      }
      if (k)
        e.fail("variable '" + e.atom + "' needs a copy index here: write (copy i " + e.atom + ")");
      return mk_var(lookup(e));
    }
    const std::string &h = e.head();
    if (h.empty())
      e.fail("expected an operator application");
    const std::size_t n = e.items.size() - 1;
    auto arity = [&](std::size_t want) {
      if (n != want)
        e.fail("'" + h + "' expects " + std::to_string(want) + " argument(s), got " + std::to_string(n));
    };

    if (h == "next") {
      arity(1);
      if (!allow_next)
        e.fail("(next ...) is only allowed in the transition relation");
      if (!e.items[1].is_atom())
        e.fail("(next ...) takes a plain variable name");
      return mk_var(lookup(e.items[1]).with_primed(true));
    }
    if (h == "copy") {
      arity(2);
      if (!k)
        e.fail("(copy ...) is only allowed in the property and predicates");
      const SExpr &idx = e.items[1];
      if (!idx.is_atom() || !is_integer_literal(idx.atom))
        idx.fail("copy index must be a positive integer");
      int i = std::stoi(idx.atom);
      if (i < 1 || i > *k)
        idx.fail("copy index " + idx.atom + " outside 1.." + std::to_string(*k));
      return mk_var(lookup(e.items[2]).with_copy(i));
    }
    if (h == "*") {
      arity(2);
      Expr a = read(e.items[1]);
      Expr b = read(e.items[2]);
      if (a.op() != Op::IntConst)
        std::swap(a, b);
      if (a.op() != Op::IntConst) {
        auto neg_const = [](const Expr &x) { return x.op() == Op::Neg && x.args()[0].op() == Op::IntConst; };
        if (neg_const(a))
          a = mk_int(-a.args()[0].value());
        else
          e.fail("nonlinear multiplication is not supported");
      }
      return wrap(e, [&] { return mk_mul(a.value(), b); });
    }

    std::vector<Expr> args;
    for (std::size_t i = 1; i < e.items.size(); ++i)
      args.push_back(read(e.items[i]));

    return wrap(e, [&]() -> Expr {
      if (h == "and")
        return mk_and(args);
      if (h == "or")
        return mk_or(args);
      if (h == "not") {
        arity(1);
        return mk_not(args[0]);
      }
      if (h == "=>") {
        arity(2);
        return mk_implies(args[0], args[1]);
      }
      if (h == "=" || h == "iff") {
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
      if (h == "+") {
        if (n < 1)
          e.fail("'+' needs arguments");
        return mk_add(args);
      }
      if (h == "-") {
        if (n == 1)
          return mk_neg(args[0]);
        if (n < 1)
          e.fail("'-' needs arguments");
        Expr acc = args[0];
        for (std::size_t i = 1; i < args.size(); ++i)
          acc = mk_sub(acc, args[i]);
        return acc;
      }
      if (h == "select") {
        arity(2);
        return mk_select(args[0], args[1]);
      }
      if (h == "store") {
        arity(3);
        return mk_store(args[0], args[1], args[2]);
      }
      e.fail("unknown operator '" + h + "'");
    });
  }

  template <class F> Expr wrap(const SExpr &e, F &&fn) const {
    try {
      return fn();
    } catch (const SortError &err) {
      e.fail(err.what());
    }
  }
};

const SExpr &single_arg(const SExpr &form) {
  if (form.items.size() != 2)
    form.fail("(" + form.head() + " ...) takes exactly one formula");
  return form.items[1];
}

Expr read_bool(const SExpr &e, const std::vector<Var> &vars, bool allow_next, std::optional<int> k) {
  Expr f = parse_formula(e, vars, allow_next, k);
  if (!f.is_bool())
    e.fail("expected a boolean formula");
  return f;
}

} // namespace

Expr parse_formula(const SExpr &e, const std::vector<Var> &vars, bool allow_next, std::optional<int> k) {
  FormulaReader r{vars, allow_next, k};
  return r.read(e);
}

ProblemFile parse_problem(const std::string &text) {
  auto forms = parse_sexprs(text);
  ProblemFile pf;
  std::map<std::string, const SExpr *> seen;
  std::vector<const SExpr *> options;
  for (const auto &f : forms) {
    const std::string &h = f.head();
    if (h == "option") {
      options.push_back(&f);
      continue;
    }
    if (h != "vars" && h != "trans" && h != "terminal" && h != "property" && h != "predicates")
      f.fail("unknown top-level form " + (h.empty() ? f.to_string() : "'" + h + "'"));
    if (seen.count(h))
      f.fail("duplicate (" + h + " ...) form");
    seen[h] = &f;
  }
  for (const char *req : {"vars", "trans", "terminal", "property"})
    if (!seen.count(req))
      throw ParseError(std::string("missing (") + req + " ...) form", 1, 1);

  const SExpr &vars_form = *seen["vars"];
  std::set<std::string> names;
  for (std::size_t i = 1; i < vars_form.items.size(); ++i) {
    const SExpr &d = vars_form.items[i];
    if (!d.is_list || d.items.size() != 2 || !d.items[0].is_atom())
      d.fail("variable declaration must look like (name Sort)");
    const std::string &name = d.items[0].atom;
    if (!is_valid_identifier(name))
      d.items[0].fail("invalid variable name '" + name + "'");
    if (name.rfind("__", 0) == 0)
      d.items[0].fail("names starting with '__' are reserved");
    if (name.size() >= 5 && name.compare(name.size() - 5, 5, "_next") == 0)
      d.items[0].fail("names ending in '_next' are reserved");
    if (!names.insert(name).second)
      d.items[0].fail("duplicate variable '" + name + "'");
    pf.system.vars.emplace_back(name, parse_sort(d.items[1]));
  }
  const auto &vars = pf.system.vars;

  pf.system.trans = read_bool(single_arg(*seen["trans"]), vars, true, std::nullopt);
  pf.system.terminal = read_bool(single_arg(*seen["terminal"]), vars, false, std::nullopt);

  const SExpr &prop = *seen["property"];
  std::optional<int> k;
  const SExpr *pre = nullptr;
  const SExpr *post = nullptr;
  for (std::size_t i = 1; i < prop.items.size(); ++i) {
    const SExpr &c = prop.items[i];
    const std::string &h = c.head();
    if (h == "k") {
      if (c.items.size() != 2 || !c.items[1].is_atom() || !is_integer_literal(c.items[1].atom))
        c.fail("(k N) needs a positive integer");
      k = std::stoi(c.items[1].atom);
      if (*k < 1 || *k > 16)
        c.fail("k must be in 1..16");
    } else if (h == "pre" || h == "post") {
      auto &slot = h == "pre" ? pre : post;
      if (slot)
        c.fail("duplicate (" + h + " ...)");
      slot = &single_arg(c);
    } else {
      c.fail("unknown property clause " + c.to_string());
    }
  }
  if (!k)
    prop.fail("property is missing (k N)");
  if (!pre || !post)
    prop.fail("property needs both (pre ...) and (post ...)");
  pf.property.k = *k;
  pf.property.pre = read_bool(*pre, vars, false, k);
  pf.property.post = read_bool(*post, vars, false, k);

  if (seen.count("predicates")) {
    std::vector<Expr> preds;
    const SExpr &pf_form = *seen["predicates"];
    for (std::size_t i = 1; i < pf_form.items.size(); ++i)
      preds.push_back(read_bool(pf_form.items[i], vars, false, k));
    pf.predicates = std::move(preds);
  }

  for (const SExpr *o : options) {
    if (o->items.size() != 3 || !o->items[1].is_atom() || !o->items[2].is_atom())
      o->fail("option must look like (option key value)");
    std::string value = o->items[2].atom;
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (!pf.options.emplace(o->items[1].atom, value).second)
      o->fail("duplicate option '" + o->items[1].atom + "'");
  }

  try {
    pf.system.validate();
    pf.property.validate(pf.system);
  } catch (const std::invalid_argument &e) {
    throw ParseError(e.what(), 1, 1);
  }
  return pf;
}

ProblemFile load_problem(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_problem(ss.str());
  } catch (const ParseError &e) {
    throw InputError(path + ":" + e.what());
  }
}

} // namespace pdsc
