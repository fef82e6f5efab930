#pragma once

#include "starkc/ast.hpp"

#include <string>
#include <vector>

namespace starkc {

struct SourceSpan {
  std::string file;
  int line = 1;    // 1-based
  int column = 1;  // 1-based
};

class ParseError : public Error {
public:
  ParseError(SourceSpan span, const std::string& message);
  const SourceSpan& span() const { return span_; }

private:
  SourceSpan span_;
};

/// Parses a logic-program file: clauses `Head.` or `Head :- Body.` with
/// bodies over `,` `;` `\+` `=` `true` `fail` and `some(X, G)`. Variables
/// start uppercase or `_`; functors start lowercase, are quoted, or are
/// integers. `%` comments run to end of line.
Program parse_program(const std::string& text, const std::string& file = "<program>");

/// Parses a property file: `:- lemma(Name, Statement, Proof).` declarations
/// (also corollary/theorem). The proof argument is accepted and discarded.
/// Statements are universally closed over their residual free variables.
std::vector<Fact> parse_facts(const std::string& text, const std::string& file = "<facts>");

/// Parses one goal in clause-body syntax (used by the solve command).
GoalPtr parse_goal(const std::string& text, const std::string& file = "<goal>");

} // namespace starkc
