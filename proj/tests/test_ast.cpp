#include "starkc/ast.hpp"

#include "support/gen.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace starkc;

namespace {

TermPtr v(const std::string& n) { return Term::var(n); }
TermPtr zero() { return Term::constant("0"); }
TermPtr s(TermPtr t) { return Term::app("s", {std::move(t)}); }

FormulaPtr nat_s(TermPtr t) {
  return Formula::pred(PredId{"nat", 1}, Mode::Succeeds, {std::move(t)});
}
FormulaPtr add_s(TermPtr a, TermPtr b, TermPtr c) {
  return Formula::pred(PredId{"add", 3}, Mode::Succeeds,
                       {std::move(a), std::move(b), std::move(c)});
}

int count_connectives(const FormulaPtr& f) {
  return std::visit(
      overloaded{
          [](const Formula::Top&) { return 0; },
          [](const Formula::Bot&) { return 0; },
          [](const Formula::Eq&) { return 0; },
          [](const Formula::Pred&) { return 0; },
          [](const Formula::Gr&) { return 0; },
          [](const Formula::Not& x) { return 1 + count_connectives(x.inner); },
          [](const Formula::And& x) {
            return 1 + count_connectives(x.left) + count_connectives(x.right);
          },
          [](const Formula::Or& x) {
            return 1 + count_connectives(x.left) + count_connectives(x.right);
          },
          [](const Formula::Implies& x) {
            return 1 + count_connectives(x.left) + count_connectives(x.right);
          },
          [](const Formula::Iff& x) {
            return 1 + count_connectives(x.left) + count_connectives(x.right);
          },
          [](const Formula::Forall& x) { return 1 + count_connectives(x.body); },
          [](const Formula::Exists& x) { return 1 + count_connectives(x.body); },
      },
      f->node());
}

} // namespace

TEST_SUITE("ast") {

TEST_CASE("free_vars on closed and open formulas") {
  CHECK(free_vars(Formula::top()).empty());

  auto open = nat_s(v("x"));
  CHECK(free_vars(open) == std::vector<std::string>{"x"});

  auto closed = Formula::forall(
      "x", Formula::implies(nat_s(v("x")), add_s(v("x"), zero(), v("x"))));
  CHECK(free_vars(closed).empty());
}

TEST_CASE("free_vars preserves first-occurrence order") {
  auto f = Formula::and_(add_s(v("b"), v("a"), v("b")), nat_s(v("c")));
  CHECK(free_vars(f) == std::vector<std::string>{"b", "a", "c"});
}

TEST_CASE("substitute replaces all free occurrences") {
  auto f = add_s(v("x"), zero(), v("x"));
  auto g = substitute(f, {{"x", s(v("y"))}});
  CHECK(equal(g, add_s(s(v("y")), zero(), s(v("y")))));
}

TEST_CASE("substitute renames binders to avoid capture") {
  // substitute(ex y. q(x,y), {x -> y}) must not capture the inserted y
  auto f = Formula::exists("y", Formula::pred(PredId{"q", 2}, Mode::Succeeds,
                                              {v("x"), v("y")}));
  auto g = substitute(f, {{"x", v("y")}});
  const auto* ex = g->as<Formula::Exists>();
  REQUIRE(ex != nullptr);
  CHECK(ex->var != "y");
  const auto* atom = ex->body->as<Formula::Pred>();
  REQUIRE(atom != nullptr);
  CHECK(atom->args[0]->as_var()->name == "y");
  CHECK(atom->args[1]->as_var()->name == ex->var);
}

TEST_CASE("substitute with no matching occurrence is the identity") {
  auto f = Formula::top();
  CHECK(substitute(f, {{"x", zero()}}) == f);

  auto g = Formula::forall("y", nat_s(v("y")));
  CHECK(substitute(g, {{"x", zero()}}) == g);
}

TEST_CASE("substitution properties over random formulas") {
  gen::Rng rng(20240601);
  gen::Signature sig = gen::statement_signature();
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = gen::statement(rng, sig, 1 + rng.below(8));

    // identity when the binding domain misses the free variables
    FormulaPtr id = substitute(f, {{"nosuchvar", zero()}});
    CHECK(equal(id, f));

    // connective multiset is preserved
    std::vector<std::string> frees = free_vars(f);
    if (!frees.empty()) {
      const std::string& x = frees[static_cast<size_t>(rng.below(
          static_cast<int>(frees.size())))];
      TermPtr t = gen::term(rng, sig, 2);
      FormulaPtr g = substitute(f, {{x, t}});
      CHECK(count_connectives(g) == count_connectives(f));

      // free_vars(f[x:=t]) = (free_vars(f) \ {x}) + vars(t)
      std::set<std::string> expect;
      for (const auto& w : frees)
        if (w != x) expect.insert(w);
      for (const auto& w : term_vars(t)) expect.insert(w);
      std::vector<std::string> got_v = free_vars(g);
      std::set<std::string> got(got_v.begin(), got_v.end());
      CHECK(got == expect);
    }
  }
}

TEST_CASE("alpha equality ignores binder names only") {
  auto f = Formula::forall("x", nat_s(v("x")));
  auto g = Formula::forall("y", nat_s(v("y")));
  auto h = Formula::forall("y", nat_s(v("z")));
  CHECK(alpha_equal(f, g));
  CHECK(!alpha_equal(f, h));
  CHECK(!alpha_equal(f, Formula::exists("x", nat_s(v("x")))));
}

TEST_CASE("equal_mod_ac permutes conjuncts and disjuncts at any depth") {
  auto a = nat_s(v("x"));
  auto b = nat_s(zero());
  auto c = Formula::gr(v("x"));
  auto lhs = Formula::forall("x", Formula::and_(a, Formula::and_(b, c)));
  auto rhs = Formula::forall("y",
      Formula::and_(Formula::and_(Formula::gr(v("y")), nat_s(zero())), nat_s(v("y"))));
  CHECK(equal_mod_ac(lhs, rhs));

  auto im1 = Formula::implies(a, b);
  auto im2 = Formula::implies(b, a);
  CHECK(!equal_mod_ac(im1, im2));  // implication operands do not commute
}

TEST_CASE("goal substitution avoids capture under some") {
  GoalPtr g = Goal::some("Y", Goal::eq(v("X"), v("Y")));
  GoalPtr r = substitute(g, {{"X", v("Y")}});
  const auto* some = r->as<Goal::Some>();
  REQUIRE(some != nullptr);
  CHECK(some->var != "Y");
  const auto* eq = some->body->as<Goal::Eq>();
  CHECK(eq->lhs->as_var()->name == "Y");
  CHECK(eq->rhs->as_var()->name == some->var);
}

TEST_CASE("fresh variable generation skips reserved names") {
  FreshVarGen gen("x");
  gen.reserve("x1");
  gen.reserve("x3");
  CHECK(gen.fresh() == "x2");
  CHECK(gen.fresh() == "x4");
}

} // TEST_SUITE
