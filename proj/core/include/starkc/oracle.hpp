#pragma once

#include "starkc/ast.hpp"

#include <map>
#include <optional>

namespace starkc {

// Idempotent variable binding: no bound variable occurs in any range term
// once normalized, so applying twice equals applying once.
class Substitution {
public:
  Substitution() = default;
  explicit Substitution(std::map<std::string, TermPtr> bindings);

  const std::map<std::string, TermPtr>& bindings() const { return map_; }
  TermPtr apply(const TermPtr& t) const;

private:
  std::map<std::string, TermPtr> map_;
};

/// Most general unifier with the occurs check, or nothing.
std::optional<Substitution> unify(const TermPtr& s, const TermPtr& t);

enum class VerdictStatus {
  Succeeds,
  Fails,
  DepthExceeded,
  UnsafeNegation,  // a \+ subgoal was not ground at evaluation time
};
std::string_view verdict_name(VerdictStatus s);

struct Verdict {
  VerdictStatus status = VerdictStatus::DepthExceeded;
  long nodes = 0;  // resolution nodes explored
};

/// Depth-bounded SLDNF evaluation; depth counts resolution steps (calls)
/// along a derivation. Succeeds when some derivation within the bound
/// succeeds; Fails when the whole search tree is exhausted within the bound
/// without a success; DepthExceeded otherwise. Clauses are tried top-down,
/// conjunctions left to right, negation as finite failure on ground subgoals.
Verdict solve(const Program& p, const GoalPtr& g, int depth);

} // namespace starkc
