#include "starkc/oracle.hpp"

#include <algorithm>

namespace starkc {

std::string_view verdict_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Succeeds: return "succeeds";
    case VerdictStatus::Fails: return "fails";
    case VerdictStatus::DepthExceeded: return "depth-exceeded";
    case VerdictStatus::UnsafeNegation: return "unsafe-negation";
  }
  return "?";
}

namespace {

// Resolves a variable through a (possibly triangular) binding chain.
TermPtr walk(TermPtr t, const std::map<std::string, TermPtr>& bindings) {
  while (const auto* v = t->as_var()) {
    auto it = bindings.find(v->name);
    if (it == bindings.end()) break;
    t = it->second;
  }
  return t;
}

TermPtr deep_apply(const TermPtr& t, const std::map<std::string, TermPtr>& bindings) {
  TermPtr w = walk(t, bindings);
  if (const auto* a = w->as_app()) {
    bool changed = false;
    std::vector<TermPtr> args;
    args.reserve(a->args.size());
    for (const auto& arg : a->args) {
      args.push_back(deep_apply(arg, bindings));
      changed = changed || args.back() != arg;
    }
    return changed ? Term::app(a->functor, std::move(args)) : w;
  }
  return w;
}

bool occurs(const std::string& var, const TermPtr& t,
            const std::map<std::string, TermPtr>& bindings) {
  TermPtr w = walk(t, bindings);
  if (const auto* v = w->as_var()) return v->name == var;
  const auto* a = w->as_app();
  return std::any_of(a->args.begin(), a->args.end(), [&](const TermPtr& arg) {
    return occurs(var, arg, bindings);
  });
}

bool unify_rec(const TermPtr& s, const TermPtr& t, std::map<std::string, TermPtr>& bindings) {
  TermPtr a = walk(s, bindings);
  TermPtr b = walk(t, bindings);
  const auto* va = a->as_var();
  const auto* vb = b->as_var();
  if (va && vb && va->name == vb->name) return true;
  if (va) {
    if (occurs(va->name, b, bindings)) return false;
    bindings[va->name] = b;
    return true;
  }
  if (vb) {
    if (occurs(vb->name, a, bindings)) return false;
    bindings[vb->name] = a;
    return true;
  }
  const auto* fa = a->as_app();
  const auto* fb = b->as_app();
  if (fa->functor != fb->functor || fa->args.size() != fb->args.size()) return false;
  for (size_t i = 0; i < fa->args.size(); ++i) {
    if (!unify_rec(fa->args[i], fb->args[i], bindings)) return false;
  }
  return true;
}

} // namespace

Substitution::Substitution(std::map<std::string, TermPtr> bindings) {
  // Normalize to an idempotent map: fully resolve every range term. The
  // occurs check guarantees the chains are acyclic.
  for (const auto& [var, term] : bindings) {
    map_[var] = deep_apply(term, bindings);
  }
}

TermPtr Substitution::apply(const TermPtr& t) const { return deep_apply(t, map_); }

std::optional<Substitution> unify(const TermPtr& s, const TermPtr& t) {
  std::map<std::string, TermPtr> bindings;
  if (!unify_rec(s, t, bindings)) return std::nullopt;
  return Substitution(std::move(bindings));
}

// ---------------------------------------------------------------------------
// SLDNF search

namespace {

struct Search {
  const Program& program;
  int max_steps;
  long nodes = 0;
  bool exceeded = false;
  bool unsafe = false;
  long* rename_counter;

  // Explores the tree under the and-stack `goals`; returns true as soon as
  // one derivation succeeds. `steps` counts calls along the current branch.
  bool run(std::vector<GoalPtr> goals, std::map<std::string, TermPtr> bindings, int steps) {
    if (unsafe) return false;
    ++nodes;
    if (goals.empty()) return true;
    GoalPtr g = goals.back();
    goals.pop_back();
    return std::visit(
        overloaded{
            [&](const Goal::True&) { return run(std::move(goals), std::move(bindings), steps); },
            [&](const Goal::Fail&) { return false; },
            [&](const Goal::Eq& x) {
              auto trail = bindings;
              if (!unify_rec(x.lhs, x.rhs, trail)) return false;
              return run(std::move(goals), std::move(trail), steps);
            },
            [&](const Goal::Naf& x) {
              GoalPtr inner = resolve_goal(x.inner, bindings);
              if (!is_ground(inner)) {
                unsafe = true;
                return false;
              }
              Search sub{program, max_steps, 0, false, false, rename_counter};
              bool succeeded = sub.run({inner}, {}, steps);
              nodes += sub.nodes;
              if (sub.unsafe) {
                unsafe = true;
                return false;
              }
              if (succeeded) return false;  // \+ fails
              if (sub.exceeded) {
                exceeded = true;  // inner tree inconclusive
                return false;
              }
              return run(std::move(goals), std::move(bindings), steps);
            },
            [&](const Goal::And& x) {
              goals.push_back(x.right);
              goals.push_back(x.left);
              return run(std::move(goals), std::move(bindings), steps);
            },
            [&](const Goal::Or& x) {
              auto left_goals = goals;
              left_goals.push_back(x.left);
              if (run(std::move(left_goals), bindings, steps)) return true;
              goals.push_back(x.right);
              return run(std::move(goals), std::move(bindings), steps);
            },
            [&](const Goal::Some& x) {
              std::string fresh = fresh_var();
              GoalPtr body = substitute(x.body, {{x.var, Term::var(fresh)}});
              goals.push_back(body);
              return run(std::move(goals), std::move(bindings), steps);
            },
            [&](const Goal::Atom& x) {
              if (steps + 1 > max_steps) {
                exceeded = true;
                return false;
              }
              for (const Clause* c : program.clauses_for(x.pred)) {
                auto [head_args, body] = rename_clause(*c);
                auto trail = bindings;
                bool ok = true;
                for (size_t i = 0; i < x.args.size() && ok; ++i) {
                  ok = unify_rec(x.args[i], head_args[i], trail);
                }
                if (!ok) continue;
                auto next = goals;
                next.push_back(body);
                if (run(std::move(next), std::move(trail), steps + 1)) return true;
                if (unsafe) return false;
              }
              return false;
            },
        },
        g->node());
  }

  std::string fresh_var() { return "_R" + std::to_string(++*rename_counter); }

  std::pair<std::vector<TermPtr>, GoalPtr> rename_clause(const Clause& c) {
    std::vector<std::string> vars;
    for (const auto& t : c.head_args) collect_vars(t, vars);
    for (const auto& v : goal_free_vars(c.body)) add_unique(vars, v);
    std::map<std::string, TermPtr> renaming;
    for (const auto& v : vars) renaming[v] = Term::var(fresh_var());
    std::vector<TermPtr> head;
    head.reserve(c.head_args.size());
    for (const auto& t : c.head_args) head.push_back(substitute(t, renaming));
    return {std::move(head), substitute(c.body, renaming)};
  }

  // Applies the current bindings to every term inside a goal.
  GoalPtr resolve_goal(const GoalPtr& g, const std::map<std::string, TermPtr>& bindings) {
    std::map<std::string, TermPtr> resolved;
    for (const auto& v : goal_free_vars(g)) {
      TermPtr t = deep_apply(Term::var(v), bindings);
      if (!t->as_var() || t->as_var()->name != v) resolved[v] = t;
    }
    return substitute(g, resolved);
  }
};

} // namespace

Verdict solve(const Program& p, const GoalPtr& g, int depth) {
  long renames = 0;
  Search search{p, depth, 0, false, false, &renames};
  bool succeeded = search.run({g}, {}, 0);
  Verdict v;
  v.nodes = search.nodes;
  if (search.unsafe) {
    v.status = VerdictStatus::UnsafeNegation;
  } else if (succeeded) {
    v.status = VerdictStatus::Succeeds;
  } else if (search.exceeded) {
    v.status = VerdictStatus::DepthExceeded;
  } else {
    v.status = VerdictStatus::Fails;
  }
  return v;
}

} // namespace starkc
