#pragma once

#include "starkc/ast.hpp"

namespace starkc {

// Syntactic operators from goals to first-order formulas: s_of expresses
// success, f_of failure, t_of termination. gr_of_goal maps a goal to the
// conjunction of groundness constraints of its argument terms; over a term,
// groundness stays the atomic Gr(t).

FormulaPtr s_of(const GoalPtr& g);
FormulaPtr f_of(const GoalPtr& g);
FormulaPtr t_of(const GoalPtr& g);
FormulaPtr gr_of_goal(const GoalPtr& g);
FormulaPtr gr_of_term(const TermPtr& t);

/// Boolean-unit rewriting: removes top/bot units introduced by the operator
/// tables (top & f -> f, bot | f -> f, quantifier over a unit collapses, ...).
/// Purely local; preserves logical equivalence.
FormulaPtr simplify_units(const FormulaPtr& f);

} // namespace starkc
