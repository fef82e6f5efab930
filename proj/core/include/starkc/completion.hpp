#pragma once

#include "starkc/ast.hpp"

#include <map>
#include <set>

namespace starkc {

// Clark's if-and-only-if completed definition of one predicate. The body is a
// disjunction with one disjunct per source clause, each of shape
//   some y1 ... some yk (x1 = t1, ..., xn = tn, B)
// over fresh head variables x1..xn; zero clauses give body fail.
struct DefinitionForm {
  PredId pred;
  std::vector<std::string> head_vars;
  GoalPtr body;
};

DefinitionForm completed_definition(const Program& p, const PredId& r);

/// Eliminates head equations x_i = v whose right side is a clause variable,
/// substituting v by x_i throughout the disjunct and dropping v's binder.
/// Logically equivalent to the input form.
DefinitionForm simplify_definition(const DefinitionForm& d);

struct DependencyInfo {
  std::map<PredId, std::set<PredId>> calls;  // positive and negative merged
  std::vector<std::vector<PredId>> sccs;
};

DependencyInfo dependency_info(const Program& p);

/// True iff r's strongly connected component is the singleton {r}; r itself
/// may or may not be self-recursive.
bool is_directly_recursive(const DependencyInfo& d, const PredId& r);

} // namespace starkc
