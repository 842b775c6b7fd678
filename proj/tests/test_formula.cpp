#include "support.hpp"

#include <doctest.h>

using namespace pdsc;
using testing::iv;

TEST_CASE("connectives fold constants") {
  Expr a = mk_var(Var("p", Sort::bool_sort()));
  CHECK(mk_and(a, mk_true()) == a);
  CHECK(mk_and(a, mk_false()).is_false());
  CHECK(mk_or(a, mk_true()).is_true());
  CHECK(mk_and(std::vector<Expr>{}).is_true());
  CHECK(mk_or(std::vector<Expr>{}).is_false());
}

TEST_CASE("sort errors") {
  Expr i = mk_var(Var("x", Sort::int_sort()));
  Expr b = mk_var(Var("p", Sort::bool_sort()));
  CHECK_THROWS_AS(mk_and(i, b), SortError);
  CHECK_THROWS_AS(mk_lt(b, i), SortError);
  CHECK_THROWS_AS(mk_select(i, i), SortError);
  CHECK(mk_eq(b, b).op() == Op::Iff);
}

TEST_CASE("wire names") {
  Var v("x", Sort::int_sort(), 2, true);
  CHECK(v.wire_name() == "x$2_next");
  CHECK(Var("x", Sort::int_sort(), 1).wire_name() == "x$1");
  CHECK(Var("x", Sort::int_sort()).with_primed().wire_name() == "x_next");
  CHECK(mk_int(-3).to_wire() == "(- 3)");
  CHECK(is_valid_identifier("a_b1"));
  CHECK_FALSE(is_valid_identifier("1a"));
  CHECK_FALSE(is_valid_identifier("a$b"));
}

TEST_CASE("rename_copy and prime") {
  Expr f = mk_lt(mk_var(Var("x", Sort::int_sort())), mk_var(Var("y", Sort::int_sort())));
  Expr g = rename_copy(f, 2);
  auto vs = free_vars(g);
  CHECK(vs.size() == 2);
  CHECK(vs.count(iv("x", 2)) == 1);
  CHECK_THROWS_AS(rename_copy(g, 1), SortError);
  Expr h = prime(g);
  CHECK(free_vars(h).count(iv("y", 2).with_primed()) == 1);
  CHECK_THROWS_AS(prime(h), SortError);
}

TEST_CASE("substitute respects sorts") {
  Var x("x", Sort::int_sort());
  Expr f = mk_ge(mk_var(x), mk_int(0));
  Expr g = substitute(f, {{x, mk_add(mk_var(x), mk_int(1))}});
  CHECK(g.to_wire() == "(>= (+ x 1) 0)");
  CHECK_THROWS_AS(substitute(f, {{x, mk_true()}}), SortError);
}

TEST_CASE("atoms are collected once in order") {
  Expr p = mk_lt(testing::x("a", 1), testing::x("a", 2));
  Expr q = mk_eq(testing::x("c", 1), testing::x("c", 2));
  Expr f = mk_or(mk_and(p, mk_not(q)), mk_implies(q, p));
  auto atoms = atoms_of(f);
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[0] == p);
  CHECK(atoms[1] == q);
}

TEST_CASE("structural equality and hashing") {
  Expr a = mk_add(testing::x("a", 1), mk_int(1));
  Expr b = mk_add(testing::x("a", 1), mk_int(1));
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK_FALSE(a < b);
  CHECK(a != mk_add(testing::x("a", 2), mk_int(1)));
}

TEST_CASE("eval_bool over boolean leaves") {
  Var p("p", Sort::bool_sort());
  Var q("q", Sort::bool_sort());
  Expr f = mk_iff(mk_var(p), mk_not(mk_var(q)));
  CHECK(eval_bool(f, [&](const Var &v) { return v == p; }));
  CHECK_FALSE(eval_bool(f, [](const Var &) { return true; }));
}

TEST_CASE("parse_wire inverts to_wire") {
  Sort arr = Sort::array_sort(Sort::int_sort(), Sort::int_sort());
  auto sorts = [&](const std::string &base) -> std::optional<Sort> {
    if (base == "A")
      return arr;
    if (base == "p")
      return Sort::bool_sort();
    return Sort::int_sort();
  };
  Expr A1 = mk_var(Var("A", arr, 1));
  Expr f = mk_and(mk_lt(mk_select(A1, testing::x("i", 1)), mk_mul(-2, testing::x("h", 1))),
                  mk_or(mk_var(Var("p", Sort::bool_sort(), 2, true)),
                        mk_eq(mk_store(A1, mk_int(0), mk_int(-1)), mk_var(Var("A", arr, 2)))));
  CHECK(parse_wire(f.to_wire(), sorts) == f);
}
