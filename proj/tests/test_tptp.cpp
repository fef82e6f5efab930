#include "starkc/tptp.hpp"

#include "starkc/harness.hpp"
#include "starkc/reader.hpp"
#include "support/gen.hpp"

#include <doctest.h>

using namespace starkc;

namespace {

ManglingTable add_table() {
  Program p = parse_program(
      "nat(0). nat(s(X)) :- nat(X). add(0,Y,Y). add(s(X),Y,s(Z)) :- add(X,Y,Z).");
  return ManglingTable::build(p.signature, p.predicates);
}

} // namespace

TEST_SUITE("tptp") {

TEST_CASE("emits groundness atoms with quoted constants") {
  CHECK(emit_formula(Formula::gr(Term::constant("0")), add_table()) == "gr('0')");
}

TEST_CASE("emits the x_0_x conjecture exactly") {
  FormulaPtr f = Formula::forall(
      "x", Formula::implies(
               Formula::pred(PredId{"nat", 1}, Mode::Succeeds, {Term::var("x")}),
               Formula::pred(PredId{"add", 3}, Mode::Succeeds,
                             {Term::var("x"), Term::constant("0"), Term::var("x")})));
  CHECK(emit_formula(f, add_table()) ==
        "! [Xx] : (nat_succeeds(Xx) => add_succeeds(Xx,'0',Xx))");
}

TEST_CASE("emits the defined constants") {
  CHECK(emit_formula(Formula::top(), add_table()) == "$true");
  CHECK(emit_formula(Formula::bot(), add_table()) == "$false");
}

TEST_CASE("the emitter closes residual free variables") {
  FormulaPtr open = Formula::pred(PredId{"nat", 1}, Mode::Succeeds, {Term::var("x")});
  CHECK(emit_formula(open, add_table()) == "! [Xx] : nat_succeeds(Xx)");
}

TEST_CASE("negated equality is parenthesized") {
  FormulaPtr f = Formula::not_(Formula::eq(Term::constant("0"), Term::var("x")));
  CHECK(emit_formula(f, add_table()) == "! [Xx] : ~ ('0' = Xx)");
}

TEST_CASE("mangling collisions are reported") {
  // a functor spelled like a mode-suffixed predicate token collides
  CHECK_THROWS_AS(ManglingTable::build({{"nat_succeeds", 1}}, {{"nat", 1}}), Error);
  // the groundness token is reserved
  CHECK_THROWS_AS(ManglingTable::build({{"gr", 1}}, {}), Error);
}

TEST_CASE("mangling round-trips variables, functors and predicates") {
  ManglingTable t = add_table();
  CHECK(ManglingTable::demangle_var(ManglingTable::mangle_var("x25")) == "x25");
  CHECK(ManglingTable::demangle_var(ManglingTable::mangle_var("X")) == "X");
  CHECK(t.functor_of_token(t.functor_token({"0", 0})) == Functor{"0", 0});
  auto pm = t.pred_of_token(t.pred_token(PredId{"add", 3}, Mode::Fails));
  REQUIRE(pm.has_value());
  CHECK(pm->first == PredId{"add", 3});
  CHECK(pm->second == Mode::Fails);
}

TEST_CASE("names used at several arities get distinct symbols") {
  // FOF requires arity-consistent symbols, so f/1 and f/2 cannot share one
  Program p = parse_program("h(f(a)). h(f(a,b)).");
  ManglingTable t = ManglingTable::build(p.signature, p.predicates);
  CHECK(t.functor_token({"f", 1}) != t.functor_token({"f", 2}));
  CHECK(t.functor_of_token(t.functor_token({"f", 1})) == Functor{"f", 1});
  CHECK(t.functor_of_token(t.functor_token({"f", 2})) == Functor{"f", 2});

  Program q = parse_program("p(a). p(a,b).");
  ManglingTable tq = ManglingTable::build(q.signature, q.predicates);
  CHECK(tq.pred_token({"p", 1}, Mode::Succeeds) != tq.pred_token({"p", 2}, Mode::Succeeds));

  std::vector<ProofObligation> obs =
      build_obligations(p, parse_facts(":- lemma(l:f, succeeds h(f(a)), x)."));
  std::vector<NamedFormula> clauses = obs[0].axioms;
  clauses.push_back(obs[0].conjecture);
  CHECK(validate_fof(emit_file(clauses, t, {})).empty());
}

TEST_CASE("emit_file layout: header, blank-line separation, conjecture last") {
  ManglingTable t = add_table();
  std::vector<NamedFormula> ob{
      {"id4", NamedFormula::Role::Axiom, Formula::gr(Term::constant("0"))},
      {"triv", NamedFormula::Role::Conjecture,
       Formula::eq(Term::constant("0"), Term::constant("0"))},
  };
  std::string text = emit_file(ob, t, FileHeader{"add", "t:triv", 1, 1});
  CHECK(text.find("% program: add") == 0);
  CHECK(text.find("% fact: t:triv (1 of 1)") != std::string::npos);
  CHECK(text.find("fof(id4,axiom,gr('0')).") != std::string::npos);
  CHECK(text.find("fof(triv,conjecture,'0' = '0').") != std::string::npos);
  CHECK(text.find("axiom") < text.find("conjecture"));
  CHECK(validate_fof(text).empty());
}

TEST_CASE("emit_file rejects malformed obligations") {
  ManglingTable t = add_table();
  NamedFormula ax{"a", NamedFormula::Role::Axiom, Formula::top()};
  NamedFormula cj{"c", NamedFormula::Role::Conjecture, Formula::top()};
  CHECK_THROWS_AS(emit_file({ax}, t, {}), Error);           // no conjecture
  CHECK_THROWS_AS(emit_file({cj, cj}, t, {}), Error);       // two conjectures
  CHECK_THROWS_AS(emit_file({cj, ax}, t, {}), Error);       // conjecture not last
}

TEST_CASE("prior-fact axioms carry quoted names") {
  ManglingTable t = add_table();
  std::vector<NamedFormula> ob{
      {"lemma-(add:x_0_x)", NamedFormula::Role::Axiom, Formula::top()},
      {"c", NamedFormula::Role::Conjecture, Formula::top()},
  };
  std::string text = emit_file(ob, t, {});
  CHECK(text.find("fof('lemma-(add:x_0_x)',axiom,$true).") != std::string::npos);
  CHECK(validate_fof(text).empty());
}

TEST_CASE("validator accepts its own output and flags broken input") {
  CHECK(validate_fof("fof(x,axiom,p_succeeds(X)").size() == 1);   // unbalanced
  CHECK(!validate_fof("fof(x,axiom,! [x] : p_succeeds(x)).").empty());  // lowercase binder
  CHECK(validate_fof("fof(x,lemma,$true).").size() == 1);         // bad role
  CHECK(validate_fof("fof(x,axiom,p(X) & q(X) | r(X)).").size() == 1);  // mixed connectives
  CHECK(validate_fof("fof(x,axiom,$true).\n\nfof(y,conjecture,$false).").empty());
}

TEST_CASE("validation diagnostics carry line numbers and recover") {
  std::vector<Diagnostic> diags = validate_fof(
      "fof(a,axiom,$true).\nfof(b,axiom,! [x] : $true).\nfof(c,axiom,$true).\nfof(d,oops,$true).");
  REQUIRE(diags.size() == 2);
  CHECK(diags[0].line == 2);
  CHECK(diags[1].line == 4);
}

TEST_CASE("read_fof parses free-form fof text back into formulas") {
  std::vector<FofRecord> recs = read_fof(
      "fof(idn6,axiom,! [Xx10] : ~ ((nat_succeeds(Xx10) & nat_fails(Xx10)))).");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].name == "idn6");
  const auto* fa = recs[0].formula->as<Formula::Forall>();
  REQUIRE(fa != nullptr);
  CHECK(fa->var == "x10");
}

TEST_CASE("emitted obligations validate and demangle back to their source") {
  gen::Rng rng(5150);
  for (int i = 0; i < 120; ++i) {
    Program p = gen::program(rng);
    gen::Signature fact_sig = gen::statement_signature_for(p);
    std::vector<Fact> facts;
    int n = 1 + rng.below(3);
    for (int j = 0; j < n; ++j) facts.push_back(gen::fact(rng, fact_sig, j));

    std::vector<ProofObligation> obs = build_obligations(p, facts);
    ManglingTable table = ManglingTable::build(effective_signature(p, facts), p.predicates);
    for (const auto& ob : obs) {
      std::vector<NamedFormula> clauses = ob.axioms;
      clauses.push_back(ob.conjecture);
      std::string text = emit_file(clauses, table, FileHeader{"gen", ob.fact.name, 1, 1});
      CHECK(validate_fof(text).empty());

      std::vector<FofRecord> back = read_fof(text);
      REQUIRE(back.size() == clauses.size());
      for (size_t k = 0; k < clauses.size(); ++k) {
        CHECK(back[k].name == clauses[k].name);
        CHECK(back[k].role == clauses[k].role);
        FormulaPtr closed =
            Formula::forall_many(free_vars(clauses[k].formula), clauses[k].formula);
        CHECK(equal(back[k].formula, closed));
      }
    }
  }
}

} // TEST_SUITE
