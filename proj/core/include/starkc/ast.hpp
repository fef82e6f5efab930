#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace starkc {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Symbols

struct PredId {
  std::string name;
  int arity = 0;
  friend bool operator==(const PredId&, const PredId&) = default;
  friend auto operator<=>(const PredId&, const PredId&) = default;
};

struct Functor {
  std::string name;
  int arity = 0;
  friend bool operator==(const Functor&, const Functor&) = default;
  friend auto operator<=>(const Functor&, const Functor&) = default;
};

// ---------------------------------------------------------------------------
// Terms
//
// Immutable trees shared by pointer; arity of an application is args.size().

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
public:
  struct Var {
    std::string name;
  };
  struct App {
    std::string functor;
    std::vector<TermPtr> args;
  };
  using Node = std::variant<Var, App>;

  explicit Term(Node node) : node_(std::move(node)) {}

  static TermPtr var(std::string name);
  static TermPtr app(std::string functor, std::vector<TermPtr> args = {});
  static TermPtr constant(std::string name) { return app(std::move(name)); }

  const Node& node() const { return node_; }
  const Var* as_var() const { return std::get_if<Var>(&node_); }
  const App* as_app() const { return std::get_if<App>(&node_); }

private:
  Node node_;
};

bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b);

/// Appends variables of t to out in first-occurrence order, skipping duplicates.
void collect_vars(const TermPtr& t, std::vector<std::string>& out);
std::vector<std::string> term_vars(const TermPtr& t);
bool is_ground(const TermPtr& t);
void collect_functors(const TermPtr& t, std::vector<Functor>& out);

TermPtr substitute(const TermPtr& t, const std::map<std::string, TermPtr>& binding);

/// Prolog-style rendering: f(a,X).
std::string print_term(const TermPtr& t);

// ---------------------------------------------------------------------------
// Goals: the body language of clauses.

class Goal;
using GoalPtr = std::shared_ptr<const Goal>;

class Goal {
public:
  struct True {};
  struct Fail {};
  struct Eq {
    TermPtr lhs, rhs;
  };
  struct Atom {
    PredId pred;
    std::vector<TermPtr> args;
  };
  struct Naf {
    GoalPtr inner;
  };
  struct And {
    GoalPtr left, right;
  };
  struct Or {
    GoalPtr left, right;
  };
  struct Some {
    std::string var;  // binds exactly one variable
    GoalPtr body;
  };
  using Node = std::variant<True, Fail, Eq, Atom, Naf, And, Or, Some>;

  explicit Goal(Node node) : node_(std::move(node)) {}

  static GoalPtr truth();
  static GoalPtr fail();
  static GoalPtr eq(TermPtr lhs, TermPtr rhs);
  static GoalPtr atom(PredId pred, std::vector<TermPtr> args = {});
  static GoalPtr naf(GoalPtr inner);
  static GoalPtr conj(GoalPtr left, GoalPtr right);
  static GoalPtr disj(GoalPtr left, GoalPtr right);
  static GoalPtr some(std::string var, GoalPtr body);

  /// Right-nested conjunction of gs; empty list is true.
  static GoalPtr conj_fold(const std::vector<GoalPtr>& gs);
  /// Right-nested disjunction of gs; empty list is fail.
  static GoalPtr disj_fold(const std::vector<GoalPtr>& gs);

  const Node& node() const { return node_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

private:
  Node node_;
};

bool equal(const GoalPtr& a, const GoalPtr& b);
bool alpha_equal(const GoalPtr& a, const GoalPtr& b);
std::vector<std::string> goal_free_vars(const GoalPtr& g);
bool is_ground(const GoalPtr& g);
void collect_functors(const GoalPtr& g, std::vector<Functor>& out);
void collect_called_preds(const GoalPtr& g, std::vector<PredId>& out);

/// Capture-avoiding substitution over goals.
GoalPtr substitute(const GoalPtr& g, const std::map<std::string, TermPtr>& binding);

/// Clause-body syntax: a = b, \+ q(X), (p ; q), some(X, p(X)).
std::string print_goal(const GoalPtr& g);

// ---------------------------------------------------------------------------
// Programs

struct Clause {
  PredId pred;
  std::vector<TermPtr> head_args;
  GoalPtr body;  // Goal::truth() for facts
};

struct Program {
  std::vector<Clause> clauses;           // source order
  std::vector<Functor> signature;        // first-occurrence order
  std::vector<PredId> predicates;        // first-occurrence order

  bool has_predicate(const PredId& p) const;
  std::vector<const Clause*> clauses_for(const PredId& p) const;
};

std::string print_program(const Program& p);

// ---------------------------------------------------------------------------
// First-order formulas of the property language.

enum class Mode { Succeeds, Fails, Terminates };
std::string_view mode_name(Mode m);

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
  struct Top {};
  struct Bot {};
  struct Eq {
    TermPtr lhs, rhs;
  };
  struct Pred {
    PredId pred;
    Mode mode;
    std::vector<TermPtr> args;
  };
  struct Gr {
    TermPtr arg;
  };
  struct Not {
    FormulaPtr inner;
  };
  struct And {
    FormulaPtr left, right;
  };
  struct Or {
    FormulaPtr left, right;
  };
  struct Implies {
    FormulaPtr left, right;
  };
  struct Iff {
    FormulaPtr left, right;
  };
  struct Forall {
    std::string var;
    FormulaPtr body;
  };
  struct Exists {
    std::string var;
    FormulaPtr body;
  };
  using Node = std::variant<Top, Bot, Eq, Pred, Gr, Not, And, Or, Implies, Iff,
                            Forall, Exists>;

  explicit Formula(Node node) : node_(std::move(node)) {}

  static FormulaPtr top();
  static FormulaPtr bot();
  static FormulaPtr eq(TermPtr lhs, TermPtr rhs);
  static FormulaPtr pred(PredId pred, Mode mode, std::vector<TermPtr> args = {});
  static FormulaPtr gr(TermPtr arg);
  static FormulaPtr not_(FormulaPtr inner);
  static FormulaPtr and_(FormulaPtr left, FormulaPtr right);
  static FormulaPtr or_(FormulaPtr left, FormulaPtr right);
  static FormulaPtr implies(FormulaPtr left, FormulaPtr right);
  static FormulaPtr iff(FormulaPtr left, FormulaPtr right);
  static FormulaPtr forall(std::string var, FormulaPtr body);
  static FormulaPtr exists(std::string var, FormulaPtr body);

  static FormulaPtr forall_many(const std::vector<std::string>& vars, FormulaPtr body);
  static FormulaPtr exists_many(const std::vector<std::string>& vars, FormulaPtr body);
  /// Right-nested conjunction; empty list is top.
  static FormulaPtr and_fold(const std::vector<FormulaPtr>& fs);
  /// Right-nested disjunction; empty list is bot.
  static FormulaPtr or_fold(const std::vector<FormulaPtr>& fs);

  const Node& node() const { return node_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

private:
  Node node_;
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);

/// Free variables in first-occurrence order.
std::vector<std::string> free_vars(const FormulaPtr& f);

/// Capture-avoiding simultaneous substitution; bound variables are renamed
/// when a binding would otherwise capture them. Identity (pointer-equal)
/// when the binding domain misses every free variable.
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& binding);

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);

/// Canonical rendering that is insensitive to bound-variable names and to the
/// order/association of conjuncts and disjuncts. Two formulas compare equal
/// under equal_mod_ac iff their keys coincide.
std::string canonical_key(const FormulaPtr& f);
bool equal_mod_ac(const FormulaPtr& a, const FormulaPtr& b);

void collect_functors(const FormulaPtr& f, std::vector<Functor>& out);
void collect_pred_atoms(const FormulaPtr& f, std::vector<PredId>& out);
std::vector<std::string> all_var_names(const FormulaPtr& f);

/// Property-file statement syntax. Top/Bot have no source spelling and throw.
std::string print_statement(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Facts

enum class FactKind { Lemma, Corollary, Theorem };
std::string_view fact_kind_name(FactKind k);

struct Fact {
  FactKind kind = FactKind::Lemma;
  std::string name;       // qualified, e.g. "add:x_0_x"
  FormulaPtr statement;   // closed
};

std::string print_facts(const std::vector<Fact>& facts);

// ---------------------------------------------------------------------------
// Fresh-name generation: stem + increasing numeric suffix, skipping names
// that were reserved up front.

class FreshVarGen {
public:
  explicit FreshVarGen(std::string stem = "x") : stem_(std::move(stem)) {}

  void reserve(const std::string& name) { used_.insert(name); }
  template <class It>
  void reserve(It first, It last) {
    used_.insert(first, last);
  }

  std::string fresh();

private:
  std::string stem_;
  int next_ = 1;
  std::set<std::string> used_;
};

void add_unique(std::vector<std::string>& xs, const std::string& x);
void add_unique(std::vector<Functor>& xs, const Functor& x);
void add_unique(std::vector<PredId>& xs, const PredId& x);

} // namespace starkc
