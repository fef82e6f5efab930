#pragma once

// Deterministic random generators for property tests.

#include "starkc/ast.hpp"
#include "starkc/reader.hpp"

#include <random>
#include <string>
#include <vector>

namespace starkc::gen {

struct Rng {
  std::mt19937_64 eng;

  explicit Rng(uint64_t seed) : eng(seed) {}

  int below(int n) { return static_cast<int>(eng() % static_cast<uint64_t>(n)); }
  bool coin(double p = 0.5) {
    return std::uniform_real_distribution<double>(0, 1)(eng) < p;
  }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<size_t>(below(static_cast<int>(xs.size())))];
  }
};

struct Signature {
  std::vector<Functor> functors;
  std::vector<PredId> preds;
  std::vector<std::string> vars;
};

inline Signature program_signature() {
  return Signature{
      {{"c", 0}, {"d", 0}, {"s", 1}, {"f", 1}, {"g", 2}},
      {{"p", 1}, {"q", 2}, {"r", 0}},
      {"X", "Y", "Z", "W"},
  };
}

inline Signature statement_signature() {
  return Signature{
      {{"c", 0}, {"d", 0}, {"s", 1}, {"g", 2}},
      {{"p", 1}, {"q", 2}, {"r", 0}},
      {"x", "y", "z", "u", "v"},
  };
}

inline TermPtr term(Rng& rng, const Signature& sig, int depth, bool ground = false) {
  if (depth <= 0 || (!ground && rng.coin(0.35))) {
    if (!ground && rng.coin(0.6)) return Term::var(rng.pick(sig.vars));
    // ground leaf: a constant
    std::vector<Functor> consts;
    for (const auto& f : sig.functors)
      if (f.arity == 0) consts.push_back(f);
    return Term::constant(rng.pick(consts).name);
  }
  const Functor& f = rng.pick(sig.functors);
  std::vector<TermPtr> args;
  for (int i = 0; i < f.arity; ++i) args.push_back(term(rng, sig, depth - 1, ground));
  return Term::app(f.name, args);
}

inline GoalPtr goal(Rng& rng, const Signature& sig, int budget, bool allow_naf = true) {
  if (budget <= 1) {
    switch (rng.below(4)) {
      case 0: return Goal::truth();
      case 1: return Goal::fail();
      case 2: return Goal::eq(term(rng, sig, 2), term(rng, sig, 2));
      default: {
        const PredId& p = rng.pick(sig.preds);
        std::vector<TermPtr> args;
        for (int i = 0; i < p.arity; ++i) args.push_back(term(rng, sig, 2));
        return Goal::atom(p, args);
      }
    }
  }
  switch (rng.below(allow_naf ? 4 : 3)) {
    case 0: {
      int left = 1 + rng.below(budget - 1);
      return Goal::conj(goal(rng, sig, left, allow_naf),
                        goal(rng, sig, budget - left, allow_naf));
    }
    case 1: {
      int left = 1 + rng.below(budget - 1);
      return Goal::disj(goal(rng, sig, left, allow_naf),
                        goal(rng, sig, budget - left, allow_naf));
    }
    case 2:
      return Goal::some(rng.pick(sig.vars), goal(rng, sig, budget - 1, allow_naf));
    default:
      return Goal::naf(goal(rng, sig, budget - 1, allow_naf));
  }
}

// A parseable random program; printing and reparsing yields consistent
// signature/predicate sets.
inline Program program(Rng& rng, int max_clauses = 4, bool allow_naf = true) {
  Signature sig = program_signature();
  std::vector<Clause> clauses;
  int n = 1 + rng.below(max_clauses);
  for (int i = 0; i < n; ++i) {
    const PredId& p = rng.pick(sig.preds);
    std::vector<TermPtr> head;
    for (int j = 0; j < p.arity; ++j) head.push_back(term(rng, sig, 2));
    GoalPtr body = rng.coin(0.4) ? Goal::truth() : goal(rng, sig, 1 + rng.below(5), allow_naf);
    clauses.push_back(Clause{p, head, body});
  }
  Program tmp;
  tmp.clauses = std::move(clauses);
  return parse_program(print_program(tmp));
}

// Structured recursive programs in the style of Peano arithmetic: at most
// two predicates and four clauses, a base fact plus a structurally recursive
// clause each (the second predicate sometimes descends into the first).
// Bodies are positive, so the bounded interpreter gives conclusive verdicts
// on most ground goals.
inline Program recursive_program(Rng& rng) {
  std::string text;
  int npreds = 1 + rng.below(2);
  std::vector<std::string> wrap = {"s", "f"};
  for (int i = 0; i < npreds; ++i) {
    std::string pred = i == 0 ? "p" : "q";
    std::string w = wrap[static_cast<size_t>(rng.below(2))];
    std::string callee = (i > 0 && rng.coin(0.5)) ? "p" : pred;
    int arity = 1 + rng.below(2);
    if (arity == 1) {
      text += pred + "(c).\n";
      text += pred + "(" + w + "(X)) :- " + callee + "(X).\n";
    } else {
      text += pred + "(c,Y).\n";
      text += pred + "(" + w + "(X)," + w + "(Y)) :- " + callee + "(X,Y).\n";
    }
  }
  return parse_program(text);
}

inline TermPtr ground_term(Rng& rng, const Signature& sig, int depth) {
  return term(rng, sig, depth, /*ground=*/true);
}

inline FormulaPtr statement(Rng& rng, const Signature& sig, int budget) {
  if (budget <= 1) {
    switch (rng.below(4)) {
      case 0: {
        const PredId& p = rng.pick(sig.preds);
        std::vector<TermPtr> args;
        for (int i = 0; i < p.arity; ++i) args.push_back(term(rng, sig, 2));
        Mode m = rng.below(3) == 0   ? Mode::Succeeds
                 : rng.below(2) == 0 ? Mode::Fails
                                     : Mode::Terminates;
        return Formula::pred(p, m, args);
      }
      case 1: return Formula::eq(term(rng, sig, 2), term(rng, sig, 2));
      default: return Formula::gr(term(rng, sig, 2));
    }
  }
  switch (rng.below(7)) {
    case 0: return Formula::not_(statement(rng, sig, budget - 1));
    case 1: {
      int left = 1 + rng.below(budget - 1);
      return Formula::and_(statement(rng, sig, left), statement(rng, sig, budget - left));
    }
    case 2: {
      int left = 1 + rng.below(budget - 1);
      return Formula::or_(statement(rng, sig, left), statement(rng, sig, budget - left));
    }
    case 3: {
      int left = 1 + rng.below(budget - 1);
      return Formula::implies(statement(rng, sig, left), statement(rng, sig, budget - left));
    }
    case 4: {
      int left = 1 + rng.below(budget - 1);
      return Formula::iff(statement(rng, sig, left), statement(rng, sig, budget - left));
    }
    case 5: return Formula::forall(rng.pick(sig.vars), statement(rng, sig, budget - 1));
    default: return Formula::exists(rng.pick(sig.vars), statement(rng, sig, budget - 1));
  }
}

inline Fact fact(Rng& rng, const Signature& sig, int ordinal) {
  FormulaPtr stmt = statement(rng, sig, 2 + rng.below(6));
  stmt = Formula::forall_many(free_vars(stmt), stmt);
  FactKind kind = rng.below(3) == 0   ? FactKind::Theorem
                  : rng.below(2) == 0 ? FactKind::Corollary
                                      : FactKind::Lemma;
  return Fact{kind, "lib:prop_" + std::to_string(ordinal), stmt};
}

// A statement signature restricted to the predicates a given program defines,
// so the pair passes obligation building.
inline Signature statement_signature_for(const Program& p) {
  Signature sig = statement_signature();
  sig.preds = p.predicates;
  return sig;
}

} // namespace starkc::gen
