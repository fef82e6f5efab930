#include "starkc/ast.hpp"

#include <algorithm>
#include <sstream>

namespace starkc {

// ---------------------------------------------------------------------------
// Terms

TermPtr Term::var(std::string name) {
  return std::make_shared<Term>(Node{Var{std::move(name)}});
}

TermPtr Term::app(std::string functor, std::vector<TermPtr> args) {
  return std::make_shared<Term>(Node{App{std::move(functor), std::move(args)}});
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return std::visit(
      overloaded{
          [&](const Term::Var& va) {
            const auto* vb = b->as_var();
            return vb && va.name == vb->name;
          },
          [&](const Term::App& fa) {
            const auto* fb = b->as_app();
            return fb && fa.functor == fb->functor && equal(fa.args, fb->args);
          },
      },
      a->node());
}

bool equal(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

void collect_vars(const TermPtr& t, std::vector<std::string>& out) {
  std::visit(overloaded{
                 [&](const Term::Var& v) { add_unique(out, v.name); },
                 [&](const Term::App& a) {
                   for (const auto& arg : a.args) collect_vars(arg, out);
                 },
             },
             t->node());
}

std::vector<std::string> term_vars(const TermPtr& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

bool is_ground(const TermPtr& t) {
  return std::visit(overloaded{
                        [](const Term::Var&) { return false; },
                        [](const Term::App& a) {
                          return std::all_of(a.args.begin(), a.args.end(),
                                             [](const TermPtr& x) { return is_ground(x); });
                        },
                    },
                    t->node());
}

void collect_functors(const TermPtr& t, std::vector<Functor>& out) {
  std::visit(overloaded{
                 [](const Term::Var&) {},
                 [&](const Term::App& a) {
                   add_unique(out, Functor{a.functor, static_cast<int>(a.args.size())});
                   for (const auto& arg : a.args) collect_functors(arg, out);
                 },
             },
             t->node());
}

TermPtr substitute(const TermPtr& t, const std::map<std::string, TermPtr>& binding) {
  if (binding.empty()) return t;
  return std::visit(
      overloaded{
          [&](const Term::Var& v) -> TermPtr {
            auto it = binding.find(v.name);
            return it == binding.end() ? t : it->second;
          },
          [&](const Term::App& a) -> TermPtr {
            bool changed = false;
            std::vector<TermPtr> args;
            args.reserve(a.args.size());
            for (const auto& arg : a.args) {
              args.push_back(substitute(arg, binding));
              changed = changed || args.back() != arg;
            }
            return changed ? Term::app(a.functor, std::move(args)) : t;
          },
      },
      t->node());
}

std::string print_term(const TermPtr& t) {
  return std::visit(overloaded{
                        [](const Term::Var& v) { return v.name; },
                        [](const Term::App& a) {
                          std::string s = a.functor;
                          if (!a.args.empty()) {
                            s += '(';
                            for (size_t i = 0; i < a.args.size(); ++i) {
                              if (i) s += ',';
                              s += print_term(a.args[i]);
                            }
                            s += ')';
                          }
                          return s;
                        },
                    },
                    t->node());
}

// ---------------------------------------------------------------------------
// Goals

GoalPtr Goal::truth() { return std::make_shared<Goal>(Node{True{}}); }
GoalPtr Goal::fail() { return std::make_shared<Goal>(Node{Fail{}}); }
GoalPtr Goal::eq(TermPtr lhs, TermPtr rhs) {
  return std::make_shared<Goal>(Node{Eq{std::move(lhs), std::move(rhs)}});
}
GoalPtr Goal::atom(PredId pred, std::vector<TermPtr> args) {
  return std::make_shared<Goal>(Node{Atom{std::move(pred), std::move(args)}});
}
GoalPtr Goal::naf(GoalPtr inner) {
  return std::make_shared<Goal>(Node{Naf{std::move(inner)}});
}
GoalPtr Goal::conj(GoalPtr left, GoalPtr right) {
  return std::make_shared<Goal>(Node{And{std::move(left), std::move(right)}});
}
GoalPtr Goal::disj(GoalPtr left, GoalPtr right) {
  return std::make_shared<Goal>(Node{Or{std::move(left), std::move(right)}});
}
GoalPtr Goal::some(std::string var, GoalPtr body) {
  return std::make_shared<Goal>(Node{Some{std::move(var), std::move(body)}});
}

GoalPtr Goal::conj_fold(const std::vector<GoalPtr>& gs) {
  if (gs.empty()) return truth();
  GoalPtr acc = gs.back();
  for (size_t i = gs.size() - 1; i-- > 0;) acc = conj(gs[i], acc);
  return acc;
}

GoalPtr Goal::disj_fold(const std::vector<GoalPtr>& gs) {
  if (gs.empty()) return fail();
  GoalPtr acc = gs.back();
  for (size_t i = gs.size() - 1; i-- > 0;) acc = disj(gs[i], acc);
  return acc;
}

bool equal(const GoalPtr& a, const GoalPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node().index() != b->node().index()) return false;
  return std::visit(
      overloaded{
          [](const Goal::True&) { return true; },
          [](const Goal::Fail&) { return true; },
          [&](const Goal::Eq& x) {
            const auto* y = b->as<Goal::Eq>();
            return equal(x.lhs, y->lhs) && equal(x.rhs, y->rhs);
          },
          [&](const Goal::Atom& x) {
            const auto* y = b->as<Goal::Atom>();
            return x.pred == y->pred && equal(x.args, y->args);
          },
          [&](const Goal::Naf& x) { return equal(x.inner, b->as<Goal::Naf>()->inner); },
          [&](const Goal::And& x) {
            const auto* y = b->as<Goal::And>();
            return equal(x.left, y->left) && equal(x.right, y->right);
          },
          [&](const Goal::Or& x) {
            const auto* y = b->as<Goal::Or>();
            return equal(x.left, y->left) && equal(x.right, y->right);
          },
          [&](const Goal::Some& x) {
            const auto* y = b->as<Goal::Some>();
            return x.var == y->var && equal(x.body, y->body);
          },
      },
      a->node());
}

namespace {

void goal_free_vars_rec(const GoalPtr& g, std::vector<std::string>& bound,
                        std::vector<std::string>& out) {
  auto note = [&](const TermPtr& t) {
    std::vector<std::string> vs = term_vars(t);
    for (const auto& v : vs)
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) add_unique(out, v);
  };
  std::visit(overloaded{
                 [](const Goal::True&) {},
                 [](const Goal::Fail&) {},
                 [&](const Goal::Eq& x) {
                   note(x.lhs);
                   note(x.rhs);
                 },
                 [&](const Goal::Atom& x) {
                   for (const auto& t : x.args) note(t);
                 },
                 [&](const Goal::Naf& x) { goal_free_vars_rec(x.inner, bound, out); },
                 [&](const Goal::And& x) {
                   goal_free_vars_rec(x.left, bound, out);
                   goal_free_vars_rec(x.right, bound, out);
                 },
                 [&](const Goal::Or& x) {
                   goal_free_vars_rec(x.left, bound, out);
                   goal_free_vars_rec(x.right, bound, out);
                 },
                 [&](const Goal::Some& x) {
                   bound.push_back(x.var);
                   goal_free_vars_rec(x.body, bound, out);
                   bound.pop_back();
                 },
             },
             g->node());
}

} // namespace

std::vector<std::string> goal_free_vars(const GoalPtr& g) {
  std::vector<std::string> bound, out;
  goal_free_vars_rec(g, bound, out);
  return out;
}

bool is_ground(const GoalPtr& g) { return goal_free_vars(g).empty(); }

void collect_functors(const GoalPtr& g, std::vector<Functor>& out) {
  std::visit(overloaded{
                 [](const Goal::True&) {},
                 [](const Goal::Fail&) {},
                 [&](const Goal::Eq& x) {
                   collect_functors(x.lhs, out);
                   collect_functors(x.rhs, out);
                 },
                 [&](const Goal::Atom& x) {
                   for (const auto& t : x.args) collect_functors(t, out);
                 },
                 [&](const Goal::Naf& x) { collect_functors(x.inner, out); },
                 [&](const Goal::And& x) {
                   collect_functors(x.left, out);
                   collect_functors(x.right, out);
                 },
                 [&](const Goal::Or& x) {
                   collect_functors(x.left, out);
                   collect_functors(x.right, out);
                 },
                 [&](const Goal::Some& x) { collect_functors(x.body, out); },
             },
             g->node());
}

void collect_called_preds(const GoalPtr& g, std::vector<PredId>& out) {
  std::visit(overloaded{
                 [](const Goal::True&) {},
                 [](const Goal::Fail&) {},
                 [](const Goal::Eq&) {},
                 [&](const Goal::Atom& x) { add_unique(out, x.pred); },
                 [&](const Goal::Naf& x) { collect_called_preds(x.inner, out); },
                 [&](const Goal::And& x) {
                   collect_called_preds(x.left, out);
                   collect_called_preds(x.right, out);
                 },
                 [&](const Goal::Or& x) {
                   collect_called_preds(x.left, out);
                   collect_called_preds(x.right, out);
                 },
                 [&](const Goal::Some& x) { collect_called_preds(x.body, out); },
             },
             g->node());
}

namespace {

// Picks a name based on `base` that avoids everything in `taken`.
std::string rename_avoiding(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

std::map<std::string, TermPtr> restrict_binding(const std::map<std::string, TermPtr>& binding,
                                                const std::vector<std::string>& frees) {
  std::map<std::string, TermPtr> out;
  for (const auto& v : frees) {
    auto it = binding.find(v);
    if (it != binding.end()) out.emplace(*it);
  }
  return out;
}

std::set<std::string> range_vars(const std::map<std::string, TermPtr>& binding) {
  std::set<std::string> out;
  for (const auto& [_, t] : binding) {
    for (const auto& v : term_vars(t)) out.insert(v);
  }
  return out;
}

} // namespace

GoalPtr substitute(const GoalPtr& g, const std::map<std::string, TermPtr>& binding) {
  auto live = restrict_binding(binding, goal_free_vars(g));
  if (live.empty()) return g;
  return std::visit(
      overloaded{
          [&](const Goal::True&) { return g; },
          [&](const Goal::Fail&) { return g; },
          [&](const Goal::Eq& x) {
            return Goal::eq(substitute(x.lhs, live), substitute(x.rhs, live));
          },
          [&](const Goal::Atom& x) {
            std::vector<TermPtr> args;
            args.reserve(x.args.size());
            for (const auto& t : x.args) args.push_back(substitute(t, live));
            return Goal::atom(x.pred, std::move(args));
          },
          [&](const Goal::Naf& x) { return Goal::naf(substitute(x.inner, live)); },
          [&](const Goal::And& x) {
            return Goal::conj(substitute(x.left, live), substitute(x.right, live));
          },
          [&](const Goal::Or& x) {
            return Goal::disj(substitute(x.left, live), substitute(x.right, live));
          },
          [&](const Goal::Some& x) {
            auto inner = live;
            inner.erase(x.var);
            std::set<std::string> danger = range_vars(inner);
            if (danger.count(x.var)) {
              for (const auto& v : goal_free_vars(x.body)) danger.insert(v);
              for (const auto& [k, _] : inner) danger.insert(k);
              std::string nv = rename_avoiding(x.var, danger);
              inner[x.var] = Term::var(nv);
              return Goal::some(nv, substitute(x.body, inner));
            }
            return Goal::some(x.var, substitute(x.body, inner));
          },
      },
      g->node());
}

namespace {

int goal_print_level(const GoalPtr& g) {
  // 0 = primary, 1 = conjunction, 2 = disjunction
  if (g->as<Goal::Or>()) return 2;
  if (g->as<Goal::And>()) return 1;
  return 0;
}

void print_goal_rec(const GoalPtr& g, int max_level, std::string& out) {
  const bool parens = goal_print_level(g) > max_level;
  if (parens) out += '(';
  std::visit(overloaded{
                 [&](const Goal::True&) { out += "true"; },
                 [&](const Goal::Fail&) { out += "fail"; },
                 [&](const Goal::Eq& x) {
                   out += print_term(x.lhs);
                   out += " = ";
                   out += print_term(x.rhs);
                 },
                 [&](const Goal::Atom& x) {
                   out += print_term(Term::app(x.pred.name, x.args));
                 },
                 [&](const Goal::Naf& x) {
                   out += "\\+ ";
                   print_goal_rec(x.inner, 0, out);
                 },
                 [&](const Goal::And& x) {
                   print_goal_rec(x.left, 0, out);
                   out += ", ";
                   print_goal_rec(x.right, 1, out);
                 },
                 [&](const Goal::Or& x) {
                   print_goal_rec(x.left, 1, out);
                   out += " ; ";
                   print_goal_rec(x.right, 2, out);
                 },
                 [&](const Goal::Some& x) {
                   out += "some(" + x.var + ", ";
                   print_goal_rec(x.body, 2, out);
                   out += ')';
                 },
             },
             g->node());
  if (parens) out += ')';
}

} // namespace

std::string print_goal(const GoalPtr& g) {
  std::string out;
  print_goal_rec(g, 2, out);
  return out;
}

bool Program::has_predicate(const PredId& p) const {
  return std::find(predicates.begin(), predicates.end(), p) != predicates.end();
}

std::vector<const Clause*> Program::clauses_for(const PredId& p) const {
  std::vector<const Clause*> out;
  for (const auto& c : clauses)
    if (c.pred == p) out.push_back(&c);
  return out;
}

std::string print_program(const Program& p) {
  std::string out;
  for (const auto& c : p.clauses) {
    out += print_term(Term::app(c.pred.name, c.head_args));
    if (!c.body->as<Goal::True>()) {
      out += " :- ";
      out += print_goal(c.body);
    }
    out += ".\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formulas

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Succeeds: return "succeeds";
    case Mode::Fails: return "fails";
    case Mode::Terminates: return "terminates";
  }
  return "?";
}

FormulaPtr Formula::top() { return std::make_shared<Formula>(Node{Top{}}); }
FormulaPtr Formula::bot() { return std::make_shared<Formula>(Node{Bot{}}); }
FormulaPtr Formula::eq(TermPtr lhs, TermPtr rhs) {
  return std::make_shared<Formula>(Node{Eq{std::move(lhs), std::move(rhs)}});
}
FormulaPtr Formula::pred(PredId pred, Mode mode, std::vector<TermPtr> args) {
  return std::make_shared<Formula>(Node{Pred{std::move(pred), mode, std::move(args)}});
}
FormulaPtr Formula::gr(TermPtr arg) {
  return std::make_shared<Formula>(Node{Gr{std::move(arg)}});
}
FormulaPtr Formula::not_(FormulaPtr inner) {
  return std::make_shared<Formula>(Node{Not{std::move(inner)}});
}
FormulaPtr Formula::and_(FormulaPtr left, FormulaPtr right) {
  return std::make_shared<Formula>(Node{And{std::move(left), std::move(right)}});
}
FormulaPtr Formula::or_(FormulaPtr left, FormulaPtr right) {
  return std::make_shared<Formula>(Node{Or{std::move(left), std::move(right)}});
}
FormulaPtr Formula::implies(FormulaPtr left, FormulaPtr right) {
  return std::make_shared<Formula>(Node{Implies{std::move(left), std::move(right)}});
}
FormulaPtr Formula::iff(FormulaPtr left, FormulaPtr right) {
  return std::make_shared<Formula>(Node{Iff{std::move(left), std::move(right)}});
}
FormulaPtr Formula::forall(std::string var, FormulaPtr body) {
  return std::make_shared<Formula>(Node{Forall{std::move(var), std::move(body)}});
}
FormulaPtr Formula::exists(std::string var, FormulaPtr body) {
  return std::make_shared<Formula>(Node{Exists{std::move(var), std::move(body)}});
}

FormulaPtr Formula::forall_many(const std::vector<std::string>& vars, FormulaPtr body) {
  FormulaPtr acc = std::move(body);
  for (size_t i = vars.size(); i-- > 0;) acc = forall(vars[i], std::move(acc));
  return acc;
}

FormulaPtr Formula::exists_many(const std::vector<std::string>& vars, FormulaPtr body) {
  FormulaPtr acc = std::move(body);
  for (size_t i = vars.size(); i-- > 0;) acc = exists(vars[i], std::move(acc));
  return acc;
}

FormulaPtr Formula::and_fold(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return top();
  FormulaPtr acc = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;) acc = and_(fs[i], acc);
  return acc;
}

FormulaPtr Formula::or_fold(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return bot();
  FormulaPtr acc = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;) acc = or_(fs[i], acc);
  return acc;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node().index() != b->node().index()) return false;
  return std::visit(
      overloaded{
          [](const Formula::Top&) { return true; },
          [](const Formula::Bot&) { return true; },
          [&](const Formula::Eq& x) {
            const auto* y = b->as<Formula::Eq>();
            return equal(x.lhs, y->lhs) && equal(x.rhs, y->rhs);
          },
          [&](const Formula::Pred& x) {
            const auto* y = b->as<Formula::Pred>();
            return x.pred == y->pred && x.mode == y->mode && equal(x.args, y->args);
          },
          [&](const Formula::Gr& x) { return equal(x.arg, b->as<Formula::Gr>()->arg); },
          [&](const Formula::Not& x) { return equal(x.inner, b->as<Formula::Not>()->inner); },
          [&](const Formula::And& x) {
            const auto* y = b->as<Formula::And>();
            return equal(x.left, y->left) && equal(x.right, y->right);
          },
          [&](const Formula::Or& x) {
            const auto* y = b->as<Formula::Or>();
            return equal(x.left, y->left) && equal(x.right, y->right);
          },
          [&](const Formula::Implies& x) {
            const auto* y = b->as<Formula::Implies>();
            return equal(x.left, y->left) && equal(x.right, y->right);
          },
          [&](const Formula::Iff& x) {
            const auto* y = b->as<Formula::Iff>();
            return equal(x.left, y->left) && equal(x.right, y->right);
          },
          [&](const Formula::Forall& x) {
            const auto* y = b->as<Formula::Forall>();
            return x.var == y->var && equal(x.body, y->body);
          },
          [&](const Formula::Exists& x) {
            const auto* y = b->as<Formula::Exists>();
            return x.var == y->var && equal(x.body, y->body);
          },
      },
      a->node());
}

namespace {

void free_vars_rec(const FormulaPtr& f, std::vector<std::string>& bound,
                   std::vector<std::string>& out) {
  auto note = [&](const TermPtr& t) {
    for (const auto& v : term_vars(t))
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) add_unique(out, v);
  };
  std::visit(overloaded{
                 [](const Formula::Top&) {},
                 [](const Formula::Bot&) {},
                 [&](const Formula::Eq& x) {
                   note(x.lhs);
                   note(x.rhs);
                 },
                 [&](const Formula::Pred& x) {
                   for (const auto& t : x.args) note(t);
                 },
                 [&](const Formula::Gr& x) { note(x.arg); },
                 [&](const Formula::Not& x) { free_vars_rec(x.inner, bound, out); },
                 [&](const Formula::And& x) {
                   free_vars_rec(x.left, bound, out);
                   free_vars_rec(x.right, bound, out);
                 },
                 [&](const Formula::Or& x) {
                   free_vars_rec(x.left, bound, out);
                   free_vars_rec(x.right, bound, out);
                 },
                 [&](const Formula::Implies& x) {
                   free_vars_rec(x.left, bound, out);
                   free_vars_rec(x.right, bound, out);
                 },
                 [&](const Formula::Iff& x) {
                   free_vars_rec(x.left, bound, out);
                   free_vars_rec(x.right, bound, out);
                 },
                 [&](const Formula::Forall& x) {
                   bound.push_back(x.var);
                   free_vars_rec(x.body, bound, out);
                   bound.pop_back();
                 },
                 [&](const Formula::Exists& x) {
                   bound.push_back(x.var);
                   free_vars_rec(x.body, bound, out);
                   bound.pop_back();
                 },
             },
             f->node());
}

} // namespace

std::vector<std::string> free_vars(const FormulaPtr& f) {
  std::vector<std::string> bound, out;
  free_vars_rec(f, bound, out);
  return out;
}

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& binding) {
  auto live = restrict_binding(binding, free_vars(f));
  if (live.empty()) return f;
  auto sub_binder = [&](const std::string& var, const FormulaPtr& body,
                        auto make) -> FormulaPtr {
    auto inner = live;
    inner.erase(var);
    std::set<std::string> danger = range_vars(inner);
    if (danger.count(var)) {
      for (const auto& v : free_vars(body)) danger.insert(v);
      for (const auto& [k, _] : inner) danger.insert(k);
      std::string nv = rename_avoiding(var, danger);
      inner[var] = Term::var(nv);
      return make(nv, substitute(body, inner));
    }
    return make(var, substitute(body, inner));
  };
  return std::visit(
      overloaded{
          [&](const Formula::Top&) { return f; },
          [&](const Formula::Bot&) { return f; },
          [&](const Formula::Eq& x) {
            return Formula::eq(substitute(x.lhs, live), substitute(x.rhs, live));
          },
          [&](const Formula::Pred& x) {
            std::vector<TermPtr> args;
            args.reserve(x.args.size());
            for (const auto& t : x.args) args.push_back(substitute(t, live));
            return Formula::pred(x.pred, x.mode, std::move(args));
          },
          [&](const Formula::Gr& x) { return Formula::gr(substitute(x.arg, live)); },
          [&](const Formula::Not& x) { return Formula::not_(substitute(x.inner, live)); },
          [&](const Formula::And& x) {
            return Formula::and_(substitute(x.left, live), substitute(x.right, live));
          },
          [&](const Formula::Or& x) {
            return Formula::or_(substitute(x.left, live), substitute(x.right, live));
          },
          [&](const Formula::Implies& x) {
            return Formula::implies(substitute(x.left, live), substitute(x.right, live));
          },
          [&](const Formula::Iff& x) {
            return Formula::iff(substitute(x.left, live), substitute(x.right, live));
          },
          [&](const Formula::Forall& x) {
            return sub_binder(x.var, x.body, [](std::string v, FormulaPtr b) {
              return Formula::forall(std::move(v), std::move(b));
            });
          },
          [&](const Formula::Exists& x) {
            return sub_binder(x.var, x.body, [](std::string v, FormulaPtr b) {
              return Formula::exists(std::move(v), std::move(b));
            });
          },
      },
      f->node());
}

// ---------------------------------------------------------------------------
// Canonical keys: de Bruijn indices make the key alpha-insensitive; sorting
// flattened conjunct/disjunct lists makes it AC-insensitive. A non-sorting
// variant of the same rendering implements plain alpha equality.

namespace {

void term_key(const TermPtr& t, const std::vector<std::string>& binders, std::string& out) {
  std::visit(overloaded{
                 [&](const Term::Var& v) {
                   for (size_t i = binders.size(); i-- > 0;) {
                     if (binders[i] == v.name) {
                       out += "b" + std::to_string(binders.size() - 1 - i);
                       return;
                     }
                   }
                   out += "v:" + v.name;
                 },
                 [&](const Term::App& a) {
                   out += "(" + a.functor + "/" + std::to_string(a.args.size());
                   for (const auto& arg : a.args) {
                     out += ' ';
                     term_key(arg, binders, out);
                   }
                   out += ')';
                 },
             },
             t->node());
}

template <class NodeT>
void flatten(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (const auto* n = f->as<NodeT>()) {
    flatten<NodeT>(n->left, out);
    flatten<NodeT>(n->right, out);
  } else {
    out.push_back(f);
  }
}

void formula_key(const FormulaPtr& f, std::vector<std::string>& binders, bool ac,
                 std::string& out) {
  auto nary = [&](const char* tag, std::vector<FormulaPtr> parts) {
    std::vector<std::string> keys;
    keys.reserve(parts.size());
    for (const auto& p : parts) {
      std::string k;
      formula_key(p, binders, ac, k);
      keys.push_back(std::move(k));
    }
    if (ac) std::sort(keys.begin(), keys.end());
    out += '(';
    out += tag;
    for (const auto& k : keys) {
      out += ' ';
      out += k;
    }
    out += ')';
  };
  std::visit(
      overloaded{
          [&](const Formula::Top&) { out += "T"; },
          [&](const Formula::Bot&) { out += "F"; },
          [&](const Formula::Eq& x) {
            out += "(= ";
            term_key(x.lhs, binders, out);
            out += ' ';
            term_key(x.rhs, binders, out);
            out += ')';
          },
          [&](const Formula::Pred& x) {
            out += "(p:" + x.pred.name + "/" + std::to_string(x.pred.arity) + ":" +
                   std::string(mode_name(x.mode));
            for (const auto& t : x.args) {
              out += ' ';
              term_key(t, binders, out);
            }
            out += ')';
          },
          [&](const Formula::Gr& x) {
            out += "(gr ";
            term_key(x.arg, binders, out);
            out += ')';
          },
          [&](const Formula::Not& x) {
            out += "(~ ";
            formula_key(x.inner, binders, ac, out);
            out += ')';
          },
          [&](const Formula::And&) {
            std::vector<FormulaPtr> parts;
            flatten<Formula::And>(f, parts);
            nary("&", std::move(parts));
          },
          [&](const Formula::Or&) {
            std::vector<FormulaPtr> parts;
            flatten<Formula::Or>(f, parts);
            nary("|", std::move(parts));
          },
          [&](const Formula::Implies& x) {
            out += "(=> ";
            formula_key(x.left, binders, ac, out);
            out += ' ';
            formula_key(x.right, binders, ac, out);
            out += ')';
          },
          [&](const Formula::Iff& x) {
            out += "(<=> ";
            formula_key(x.left, binders, ac, out);
            out += ' ';
            formula_key(x.right, binders, ac, out);
            out += ')';
          },
          [&](const Formula::Forall& x) {
            binders.push_back(x.var);
            out += "(! ";
            formula_key(x.body, binders, ac, out);
            out += ')';
            binders.pop_back();
          },
          [&](const Formula::Exists& x) {
            binders.push_back(x.var);
            out += "(? ";
            formula_key(x.body, binders, ac, out);
            out += ')';
            binders.pop_back();
          },
      },
      f->node());
}

void goal_key(const GoalPtr& g, std::vector<std::string>& binders, std::string& out) {
  std::visit(overloaded{
                 [&](const Goal::True&) { out += "T"; },
                 [&](const Goal::Fail&) { out += "F"; },
                 [&](const Goal::Eq& x) {
                   out += "(= ";
                   term_key(x.lhs, binders, out);
                   out += ' ';
                   term_key(x.rhs, binders, out);
                   out += ')';
                 },
                 [&](const Goal::Atom& x) {
                   out += "(a:" + x.pred.name + "/" + std::to_string(x.pred.arity);
                   for (const auto& t : x.args) {
                     out += ' ';
                     term_key(t, binders, out);
                   }
                   out += ')';
                 },
                 [&](const Goal::Naf& x) {
                   out += "(\\+ ";
                   goal_key(x.inner, binders, out);
                   out += ')';
                 },
                 [&](const Goal::And& x) {
                   out += "(, ";
                   goal_key(x.left, binders, out);
                   out += ' ';
                   goal_key(x.right, binders, out);
                   out += ')';
                 },
                 [&](const Goal::Or& x) {
                   out += "(; ";
                   goal_key(x.left, binders, out);
                   out += ' ';
                   goal_key(x.right, binders, out);
                   out += ')';
                 },
                 [&](const Goal::Some& x) {
                   binders.push_back(x.var);
                   out += "(some ";
                   goal_key(x.body, binders, out);
                   out += ')';
                   binders.pop_back();
                 },
             },
             g->node());
}

} // namespace

std::string canonical_key(const FormulaPtr& f) {
  std::vector<std::string> binders;
  std::string out;
  formula_key(f, binders, /*ac=*/true, out);
  return out;
}

bool equal_mod_ac(const FormulaPtr& a, const FormulaPtr& b) {
  return canonical_key(a) == canonical_key(b);
}

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
  std::vector<std::string> ba, bb;
  std::string ka, kb;
  formula_key(a, ba, /*ac=*/false, ka);
  formula_key(b, bb, /*ac=*/false, kb);
  return ka == kb;
}

bool alpha_equal(const GoalPtr& a, const GoalPtr& b) {
  std::vector<std::string> ba, bb;
  std::string ka, kb;
  goal_key(a, ba, ka);
  goal_key(b, bb, kb);
  return ka == kb;
}

void collect_functors(const FormulaPtr& f, std::vector<Functor>& out) {
  std::visit(overloaded{
                 [](const Formula::Top&) {},
                 [](const Formula::Bot&) {},
                 [&](const Formula::Eq& x) {
                   collect_functors(x.lhs, out);
                   collect_functors(x.rhs, out);
                 },
                 [&](const Formula::Pred& x) {
                   for (const auto& t : x.args) collect_functors(t, out);
                 },
                 [&](const Formula::Gr& x) { collect_functors(x.arg, out); },
                 [&](const Formula::Not& x) { collect_functors(x.inner, out); },
                 [&](const Formula::And& x) {
                   collect_functors(x.left, out);
                   collect_functors(x.right, out);
                 },
                 [&](const Formula::Or& x) {
                   collect_functors(x.left, out);
                   collect_functors(x.right, out);
                 },
                 [&](const Formula::Implies& x) {
                   collect_functors(x.left, out);
                   collect_functors(x.right, out);
                 },
                 [&](const Formula::Iff& x) {
                   collect_functors(x.left, out);
                   collect_functors(x.right, out);
                 },
                 [&](const Formula::Forall& x) { collect_functors(x.body, out); },
                 [&](const Formula::Exists& x) { collect_functors(x.body, out); },
             },
             f->node());
}

void collect_pred_atoms(const FormulaPtr& f, std::vector<PredId>& out) {
  std::visit(overloaded{
                 [](const Formula::Top&) {},
                 [](const Formula::Bot&) {},
                 [](const Formula::Eq&) {},
                 [&](const Formula::Pred& x) { add_unique(out, x.pred); },
                 [](const Formula::Gr&) {},
                 [&](const Formula::Not& x) { collect_pred_atoms(x.inner, out); },
                 [&](const Formula::And& x) {
                   collect_pred_atoms(x.left, out);
                   collect_pred_atoms(x.right, out);
                 },
                 [&](const Formula::Or& x) {
                   collect_pred_atoms(x.left, out);
                   collect_pred_atoms(x.right, out);
                 },
                 [&](const Formula::Implies& x) {
                   collect_pred_atoms(x.left, out);
                   collect_pred_atoms(x.right, out);
                 },
                 [&](const Formula::Iff& x) {
                   collect_pred_atoms(x.left, out);
                   collect_pred_atoms(x.right, out);
                 },
                 [&](const Formula::Forall& x) { collect_pred_atoms(x.body, out); },
                 [&](const Formula::Exists& x) { collect_pred_atoms(x.body, out); },
             },
             f->node());
}

namespace {

void all_var_names_rec(const FormulaPtr& f, std::vector<std::string>& out) {
  auto note = [&](const TermPtr& t) {
    for (const auto& v : term_vars(t)) add_unique(out, v);
  };
  std::visit(overloaded{
                 [](const Formula::Top&) {},
                 [](const Formula::Bot&) {},
                 [&](const Formula::Eq& x) {
                   note(x.lhs);
                   note(x.rhs);
                 },
                 [&](const Formula::Pred& x) {
                   for (const auto& t : x.args) note(t);
                 },
                 [&](const Formula::Gr& x) { note(x.arg); },
                 [&](const Formula::Not& x) { all_var_names_rec(x.inner, out); },
                 [&](const Formula::And& x) {
                   all_var_names_rec(x.left, out);
                   all_var_names_rec(x.right, out);
                 },
                 [&](const Formula::Or& x) {
                   all_var_names_rec(x.left, out);
                   all_var_names_rec(x.right, out);
                 },
                 [&](const Formula::Implies& x) {
                   all_var_names_rec(x.left, out);
                   all_var_names_rec(x.right, out);
                 },
                 [&](const Formula::Iff& x) {
                   all_var_names_rec(x.left, out);
                   all_var_names_rec(x.right, out);
                 },
                 [&](const Formula::Forall& x) {
                   add_unique(out, x.var);
                   all_var_names_rec(x.body, out);
                 },
                 [&](const Formula::Exists& x) {
                   add_unique(out, x.var);
                   all_var_names_rec(x.body, out);
                 },
             },
             f->node());
}

} // namespace

std::vector<std::string> all_var_names(const FormulaPtr& f) {
  std::vector<std::string> out;
  all_var_names_rec(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Statement printing (property-file syntax)

namespace {

std::string print_fterm(const TermPtr& t) {
  return std::visit(overloaded{
                        [](const Term::Var& v) { return "?" + v.name; },
                        [](const Term::App& a) {
                          std::string s = a.functor;
                          if (!a.args.empty()) {
                            s += '(';
                            for (size_t i = 0; i < a.args.size(); ++i) {
                              if (i) s += ',';
                              s += print_fterm(a.args[i]);
                            }
                            s += ')';
                          }
                          return s;
                        },
                    },
                    t->node());
}

// precedence levels: 0 primary, 1 negation, 2 conjunction, 3 disjunction,
// 4 implication/equivalence. A quantifier body extends maximally right, so a
// quantifier is parenthesized whenever any material follows it (tail=false).
int stmt_level(const FormulaPtr& f) {
  if (f->as<Formula::Implies>() || f->as<Formula::Iff>()) return 4;
  if (f->as<Formula::Or>()) return 3;
  if (f->as<Formula::And>()) return 2;
  if (f->as<Formula::Not>()) return 1;
  return 0;
}

bool is_quant(const FormulaPtr& f) {
  return f->as<Formula::Forall>() || f->as<Formula::Exists>();
}

void print_stmt_rec(const FormulaPtr& f, int max_level, bool tail, std::string& out) {
  const bool parens = is_quant(f) ? !tail : stmt_level(f) > max_level;
  if (parens) out += '(';
  auto quant = [&](const char* word, std::string var, FormulaPtr body, auto same_kind) {
    std::vector<std::string> vars{std::move(var)};
    while (const auto* inner = same_kind(body)) {
      vars.push_back(inner->var);
      body = inner->body;
    }
    out += word;
    out += " [";
    for (size_t i = 0; i < vars.size(); ++i) {
      if (i) out += ',';
      out += vars[i];
    }
    out += "]: ";
    print_stmt_rec(body, 4, true, out);
  };
  std::visit(
      overloaded{
          [&](const Formula::Top&) -> void {
            throw Error("statement syntax has no spelling for top");
          },
          [&](const Formula::Bot&) -> void {
            throw Error("statement syntax has no spelling for bot");
          },
          [&](const Formula::Eq& x) {
            out += print_fterm(x.lhs) + " = " + print_fterm(x.rhs);
          },
          [&](const Formula::Pred& x) {
            out += std::string(mode_name(x.mode)) + " ";
            std::string head = x.pred.name;
            if (!x.args.empty()) {
              head += '(';
              for (size_t i = 0; i < x.args.size(); ++i) {
                if (i) head += ',';
                head += print_fterm(x.args[i]);
              }
              head += ')';
            }
            out += head;
          },
          [&](const Formula::Gr& x) { out += "gr(" + print_fterm(x.arg) + ")"; },
          [&](const Formula::Not& x) {
            out += "~ ";
            print_stmt_rec(x.inner, 1, false, out);
          },
          [&](const Formula::And& x) {
            print_stmt_rec(x.left, 1, false, out);
            out += " & ";
            print_stmt_rec(x.right, 2, parens ? true : tail, out);
          },
          [&](const Formula::Or& x) {
            print_stmt_rec(x.left, 2, false, out);
            out += " \\/ ";
            print_stmt_rec(x.right, 3, parens ? true : tail, out);
          },
          [&](const Formula::Implies& x) {
            print_stmt_rec(x.left, 3, false, out);
            out += " => ";
            print_stmt_rec(x.right, 4, parens ? true : tail, out);
          },
          [&](const Formula::Iff& x) {
            print_stmt_rec(x.left, 3, false, out);
            out += " <=> ";
            print_stmt_rec(x.right, 4, parens ? true : tail, out);
          },
          [&](const Formula::Forall& x) {
            quant("all", x.var, x.body, [](const FormulaPtr& b) {
              return b->as<Formula::Forall>();
            });
          },
          [&](const Formula::Exists& x) {
            quant("ex", x.var, x.body, [](const FormulaPtr& b) {
              return b->as<Formula::Exists>();
            });
          },
      },
      f->node());
  if (parens) out += ')';
}

} // namespace

std::string print_statement(const FormulaPtr& f) {
  std::string out;
  print_stmt_rec(f, 4, true, out);
  return out;
}

std::string_view fact_kind_name(FactKind k) {
  switch (k) {
    case FactKind::Lemma: return "lemma";
    case FactKind::Corollary: return "corollary";
    case FactKind::Theorem: return "theorem";
  }
  return "?";
}

namespace {

// Fact name components that are not lower words or integers get quoted.
std::string print_fact_name(const std::string& name) {
  std::string out;
  size_t start = 0;
  while (start <= name.size()) {
    size_t colon = name.find(':', start);
    std::string comp = name.substr(start, colon == std::string::npos ? std::string::npos
                                                                     : colon - start);
    bool integer = !comp.empty() && std::all_of(comp.begin(), comp.end(), [](char c) {
      return std::isdigit(static_cast<unsigned char>(c)) != 0;
    });
    bool lower_word =
        !comp.empty() && std::islower(static_cast<unsigned char>(comp[0])) &&
        std::all_of(comp.begin(), comp.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        });
    if (integer || lower_word) {
      out += comp;
    } else {
      out += '\'';
      for (char c : comp) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
      }
      out += '\'';
    }
    if (colon == std::string::npos) break;
    out += ':';
    start = colon + 1;
  }
  return out;
}

} // namespace

std::string print_facts(const std::vector<Fact>& facts) {
  std::string out;
  for (const auto& f : facts) {
    out += ":- ";
    out += fact_kind_name(f.kind);
    out += "(" + print_fact_name(f.name) + ",\n    ";
    out += print_statement(f.statement);
    out += ",\n    none).\n\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string FreshVarGen::fresh() {
  for (;;) {
    std::string cand = stem_ + std::to_string(next_++);
    if (!used_.count(cand)) {
      used_.insert(cand);
      return cand;
    }
  }
}

void add_unique(std::vector<std::string>& xs, const std::string& x) {
  if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
}

void add_unique(std::vector<Functor>& xs, const Functor& x) {
  if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
}

void add_unique(std::vector<PredId>& xs, const PredId& x) {
  if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
}

} // namespace starkc
