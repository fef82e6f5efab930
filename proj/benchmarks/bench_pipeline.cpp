#include "starkc/harness.hpp"
#include "starkc/oracle.hpp"
#include "starkc/reader.hpp"
#include "starkc/sft.hpp"

#include <benchmark/benchmark.h>

using namespace starkc;

namespace {

const char* kAdd =
    "nat(0). nat(s(X)) :- nat(X).\n"
    "add(0,Y,Y). add(s(X),Y,s(Z)) :- add(X,Y,Z).";

const char* kFacts = R"(
:- lemma(add:x_0_x, all [x]: succeeds nat(?x) => succeeds add(?x,0,?x), p).
:- lemma(add:succ, all [x,y,z]: succeeds nat(?x) & succeeds nat(?y) &
     succeeds add(s(?x),?y,?z) => succeeds add(?x,s(?y),?z), p).
:- theorem(add:commutative, all [x,y,z]: succeeds nat(?x) & succeeds nat(?y) &
     succeeds add(?x,?y,?z) => succeeds add(?y,?x,?z), p).
:- lemma(add:term:1, all [x,y,z]: succeeds nat(?x) => terminates add(?x,?y,?z), p).
:- lemma(add:term:3, all [x,y,z]: succeeds nat(?z) => terminates add(?x,?y,?z), p).
:- theorem(add:term, all [x,y,z]: succeeds nat(?x) \/ succeeds nat(?z)
     => terminates add(?x,?y,?z), p).
)";

GoalPtr deep_goal(int n) {
  GoalPtr g = parse_goal("nat(X), \\+ nat(Y) ; some(Z, add(X,Y,Z))");
  for (int i = 0; i < n; ++i) g = Goal::conj(g, g);
  return g;
}

void BM_ParseProgram(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_program(kAdd));
  }
}
BENCHMARK(BM_ParseProgram);

void BM_BuildObligations(benchmark::State& state) {
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(kFacts);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_obligations(p, facts));
  }
}
BENCHMARK(BM_BuildObligations);

void BM_OperatorImages(benchmark::State& state) {
  GoalPtr g = deep_goal(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simplify_units(t_of(g)));
  }
}
BENCHMARK(BM_OperatorImages)->Arg(2)->Arg(5)->Arg(8);

void BM_EmitAndValidate(benchmark::State& state) {
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(kFacts);
  std::vector<ProofObligation> obs = build_obligations(p, facts);
  ManglingTable table = ManglingTable::build(effective_signature(p, facts), p.predicates);
  std::vector<NamedFormula> clauses = obs.back().axioms;
  clauses.push_back(obs.back().conjecture);
  for (auto _ : state) {
    std::string text = emit_file(clauses, table, FileHeader{"add", "add:term", 6, 6});
    benchmark::DoNotOptimize(validate_fof(text));
  }
}
BENCHMARK(BM_EmitAndValidate);

void BM_OracleSolve(benchmark::State& state) {
  Program p = parse_program(kAdd);
  std::string n;
  for (int i = 0; i < state.range(0); ++i) n += "s(";
  n += "0";
  for (int i = 0; i < state.range(0); ++i) n += ")";
  GoalPtr g = parse_goal("add(" + n + ",0," + n + ")");
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(p, g, static_cast<int>(state.range(0)) + 5));
  }
}
BENCHMARK(BM_OracleSolve)->Arg(8)->Arg(16)->Arg(32);

} // namespace

BENCHMARK_MAIN();
