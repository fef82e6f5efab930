#include "starkc/completion.hpp"

#include "starkc/reader.hpp"
#include "starkc/sft.hpp"
#include "support/gen.hpp"

#include <doctest.h>

using namespace starkc;

namespace {

const char* kAdd =
    "nat(0). nat(s(X)) :- nat(X).\n"
    "add(0,Y,Y). add(s(X),Y,s(Z)) :- add(X,Y,Z).";

GoalPtr var_eq(const std::string& a, TermPtr t) {
  return Goal::eq(Term::var(a), std::move(t));
}

} // namespace

TEST_SUITE("completion") {

TEST_CASE("completed definition of nat") {
  Program p = parse_program(kAdd);
  DefinitionForm d = completed_definition(p, PredId{"nat", 1});
  REQUIRE(d.head_vars.size() == 1);

  // head variables never occur in a source clause
  for (const auto& c : p.clauses) {
    std::vector<std::string> vars;
    for (const auto& t : c.head_args) collect_vars(t, vars);
    for (const auto& v : goal_free_vars(c.body)) add_unique(vars, v);
    for (const auto& hv : d.head_vars) {
      CHECK(std::find(vars.begin(), vars.end(), hv) == vars.end());
    }
  }

  const std::string& x1 = d.head_vars[0];
  GoalPtr expect = Goal::disj(
      var_eq(x1, Term::constant("0")),
      Goal::some("w", Goal::conj(var_eq(x1, Term::app("s", {Term::var("w")})),
                                 Goal::atom(PredId{"nat", 1}, {Term::var("w")}))));
  CHECK(alpha_equal(d.body, expect));
}

TEST_CASE("completed definition of add keeps all head equations") {
  Program p = parse_program(kAdd);
  DefinitionForm d = completed_definition(p, PredId{"add", 3});
  REQUIRE(d.head_vars.size() == 3);
  const std::string &x1 = d.head_vars[0], &x2 = d.head_vars[1], &x3 = d.head_vars[2];

  GoalPtr d1 = Goal::some(
      "y", Goal::conj(var_eq(x1, Term::constant("0")),
                      Goal::conj(var_eq(x2, Term::var("y")), var_eq(x3, Term::var("y")))));
  GoalPtr d2 = Goal::some(
      "a",
      Goal::some(
          "b",
          Goal::some(
              "c",
              Goal::conj(
                  var_eq(x1, Term::app("s", {Term::var("a")})),
                  Goal::conj(
                      var_eq(x2, Term::var("b")),
                      Goal::conj(var_eq(x3, Term::app("s", {Term::var("c")})),
                                 Goal::atom(PredId{"add", 3},
                                            {Term::var("a"), Term::var("b"),
                                             Term::var("c")})))))));
  CHECK(alpha_equal(d.body, Goal::disj(d1, d2)));
}

TEST_CASE("zero-clause predicates complete to fail") {
  Program p = parse_program("p(X) :- \\+ q(X).");
  DefinitionForm d = completed_definition(p, PredId{"q", 1});
  CHECK(d.body->as<Goal::Fail>() != nullptr);
  CHECK(d.head_vars.size() == 1);
}

TEST_CASE("simplification eliminates variable head equations by substitution") {
  Program p = parse_program(kAdd);
  DefinitionForm d = simplify_definition(completed_definition(p, PredId{"add", 3}));
  const std::string &x1 = d.head_vars[0], &x2 = d.head_vars[1], &x3 = d.head_vars[2];

  // clause 1: x1 = 0 & x3 = x2 (Y eliminated); clause 2: binder for Y dropped
  GoalPtr d1 = Goal::conj(var_eq(x1, Term::constant("0")), var_eq(x3, Term::var(x2)));
  GoalPtr d2 = Goal::some(
      "a", Goal::some("c", Goal::conj(var_eq(x1, Term::app("s", {Term::var("a")})),
                                      Goal::conj(var_eq(x3, Term::app("s", {Term::var("c")})),
                                                 Goal::atom(PredId{"add", 3},
                                                            {Term::var("a"), Term::var(x2),
                                                             Term::var("c")})))));
  CHECK(alpha_equal(d.body, Goal::disj(d1, d2)));
}

TEST_CASE("nat is unchanged by simplification") {
  Program p = parse_program(kAdd);
  DefinitionForm raw = completed_definition(p, PredId{"nat", 1});
  DefinitionForm simp = simplify_definition(raw);
  CHECK(alpha_equal(raw.body, simp.body));
}

TEST_CASE("renaming clause variables yields an alpha-equivalent definition") {
  gen::Rng rng(424242);
  Program p = parse_program(
      "p(f(A),B) :- q(A,B), some(C, A = f(C)).\n"
      "p(c,c).\n"
      "q(X,Y) :- p(X,Y) ; \\+ p(Y,X).");
  Program renamed = parse_program(
      "p(f(U),V) :- q(U,V), some(W, U = f(W)).\n"
      "p(c,c).\n"
      "q(Other,More) :- p(Other,More) ; \\+ p(More,Other).");
  (void)rng;
  for (const auto& pred : p.predicates) {
    DefinitionForm a = completed_definition(p, pred);
    DefinitionForm b = completed_definition(renamed, pred);
    CHECK(alpha_equal(a.body, b.body));
    DefinitionForm sa = simplify_definition(a);
    DefinitionForm sb = simplify_definition(b);
    CHECK(alpha_equal(sa.body, sb.body));
  }
}

TEST_CASE("dependency info for the add program") {
  Program p = parse_program(kAdd);
  DependencyInfo d = dependency_info(p);
  CHECK(d.calls.at(PredId{"nat", 1}) == std::set<PredId>{{"nat", 1}});
  CHECK(d.calls.at(PredId{"add", 3}) == std::set<PredId>{{"add", 3}});
  REQUIRE(d.sccs.size() == 2);
  CHECK(d.sccs[0] == std::vector<PredId>{{"nat", 1}});
  CHECK(d.sccs[1] == std::vector<PredId>{{"add", 3}});
}

TEST_CASE("mutual recursion lands both predicates in one component") {
  Program p = parse_program("p(X) :- q(X). q(X) :- p(X).");
  DependencyInfo d = dependency_info(p);
  REQUIRE(d.sccs.size() == 1);
  CHECK(d.sccs[0].size() == 2);
  CHECK(!is_directly_recursive(d, PredId{"p", 1}));
  CHECK(!is_directly_recursive(d, PredId{"q", 1}));
}

TEST_CASE("empty program gives empty dependency info") {
  Program p = parse_program("");
  DependencyInfo d = dependency_info(p);
  CHECK(d.calls.empty());
  CHECK(d.sccs.empty());
}

TEST_CASE("directly recursive predicates") {
  Program p = parse_program(kAdd);
  DependencyInfo d = dependency_info(p);
  CHECK(is_directly_recursive(d, PredId{"nat", 1}));
  CHECK(is_directly_recursive(d, PredId{"add", 3}));

  Program f = parse_program("f(a).");
  DependencyInfo df = dependency_info(f);
  CHECK(is_directly_recursive(df, PredId{"f", 1}));  // non-recursive singleton
}

TEST_CASE("negative calls count as dependencies") {
  Program p = parse_program("p(X) :- \\+ q(X). q(X) :- \\+ p(X).");
  DependencyInfo d = dependency_info(p);
  REQUIRE(d.sccs.size() == 1);
  CHECK(d.sccs[0].size() == 2);
}

} // TEST_SUITE
