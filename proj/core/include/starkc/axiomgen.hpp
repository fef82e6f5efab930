#pragma once

#include "starkc/ast.hpp"
#include "starkc/completion.hpp"

#include <map>
#include <optional>

namespace starkc {

struct NamedFormula {
  enum class Role { Axiom, Conjecture };

  std::string name;  // unique within one proof obligation
  Role role = Role::Axiom;
  FormulaPtr formula;  // closed
};

/// Clark equality theory over the signature: one injectivity axiom per
/// argument position of each non-constant functor (id1, id1_2, ...) and one
/// distinctness axiom per unordered pair of distinct functors (id2, ...).
/// The acyclicity schema is not generated.
std::vector<NamedFormula> cet_axioms(const std::vector<Functor>& signature);

/// Groundness axioms: gr(c) for constants (id4, ...) and
/// gr(x1) & ... & gr(xm) <=> gr(f(x1..xm)) for m-ary functors (id5, ...).
std::vector<NamedFormula> gr_axioms(const std::vector<Functor>& signature);

/// Shortest name prefixes distinguishing the given predicates, used in axiom
/// names (ida6 for add, idn6 for nat). Falls back to name_arity when two
/// predicates share a name.
std::map<PredId, std::string> predicate_tags(const std::vector<PredId>& preds);

/// Uniqueness and totality: ~(Rs & Rf) and Rt => Rs | Rf, closed over the
/// argument tuple. Named id<tag>6 and id<tag>7.
std::vector<NamedFormula> uniq_total_axioms(const PredId& r, const std::string& tag);
std::vector<NamedFormula> uniq_total_axioms(const PredId& r);

/// Fixed-point axioms id<tag>s8 / id<tag>f8 / id<tag>t8: each mode predicate
/// is equivalent to the corresponding operator applied to the simplified
/// completed definition, unit-simplified.
std::vector<NamedFormula> fixedpoint_axioms(const Program& p, const PredId& r,
                                            const std::string& tag);
std::vector<NamedFormula> fixedpoint_axioms(const Program& p, const PredId& r);

/// Statically instantiates the induction schema for one conjecture, when the
/// conjecture can be rewritten as forall x. (Rs(x.) -> phi(x.)) with R
/// directly recursive. The conjecture is normalized to prenex-universal
/// premises -> goal form; the first succeeds-premise over distinct variables
/// of a directly recursive predicate is inducted on, the other premises fold
/// into phi. premise_index (1-based) overrides that choice. Returns nothing
/// when no induction applies; *why (optional) receives the reason.
std::optional<NamedFormula> induction_axiom(const Program& p, const DependencyInfo& deps,
                                            const FormulaPtr& conjecture,
                                            std::optional<int> premise_index = {},
                                            std::string* why = nullptr);

} // namespace starkc
