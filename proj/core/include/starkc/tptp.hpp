#pragma once

#include "starkc/ast.hpp"
#include "starkc/axiomgen.hpp"

#include <map>
#include <string>
#include <vector>

namespace starkc {

// Token mangling for FOF output. Variables become X-prefixed upper words
// (x -> Xx); lower-word functors pass through and anything else is single
// quoted ('0'); predicates get the _succeeds/_fails/_terminates suffix; the
// groundness predicate prints as gr. Construction fails when two distinct
// source symbols would collide on one token.
class ManglingTable {
public:
  static ManglingTable build(const std::vector<Functor>& signature,
                             const std::vector<PredId>& predicates);

  static std::string mangle_var(const std::string& name);
  static std::string demangle_var(const std::string& token);

  const std::string& functor_token(const Functor& f) const;
  const std::string& pred_token(const PredId& p, Mode m) const;

  /// Reverse lookups over the tokens this table produced.
  std::optional<Functor> functor_of_token(const std::string& token) const;
  std::optional<std::pair<PredId, Mode>> pred_of_token(const std::string& token) const;

private:
  std::map<Functor, std::string> functor_tokens_;
  std::map<std::pair<PredId, Mode>, std::string> pred_tokens_;
  std::map<std::string, Functor> functor_by_token_;
  std::map<std::string, std::pair<PredId, Mode>> pred_by_token_;
};

/// Renders one formula as FOF text, closing it universally over any residual
/// free variables first.
std::string emit_formula(const FormulaPtr& f, const ManglingTable& m);

struct FileHeader {
  std::string program;
  std::string fact;
  int ordinal = 0;
  int total = 0;
};

/// Renders a whole obligation: one fof(name,role,formula). clause per member,
/// blank-line separated, conjecture last. Throws unless exactly one member is
/// a conjecture and it is the final one.
std::string emit_file(const std::vector<NamedFormula>& obligation, const ManglingTable& m,
                      const FileHeader& header);

struct Diagnostic {
  int line = 0;
  std::string message;
};

/// Checks text against the emitter's FOF subset; empty means well formed.
std::vector<Diagnostic> validate_fof(const std::string& text);

struct FofRecord {
  std::string name;
  NamedFormula::Role role = NamedFormula::Role::Axiom;
  FormulaPtr formula;
};

/// Parses FOF text back into formulas, demangling predicate and variable
/// tokens. Throws Error on text outside the emitter's subset.
std::vector<FofRecord> read_fof(const std::string& text);

} // namespace starkc
