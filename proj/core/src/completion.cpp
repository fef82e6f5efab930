#include "starkc/completion.hpp"

#include <algorithm>
#include <functional>

namespace starkc {

namespace {

// Variables of one clause in first-occurrence order (head first, then body).
std::vector<std::string> clause_vars(const Clause& c) {
  std::vector<std::string> out;
  for (const auto& t : c.head_args) collect_vars(t, out);
  for (const auto& v : goal_free_vars(c.body)) add_unique(out, v);
  return out;
}

} // namespace

DefinitionForm completed_definition(const Program& p, const PredId& r) {
  FreshVarGen gen("x");
  for (const auto& c : p.clauses) {
    for (const auto& v : clause_vars(c)) gen.reserve(v);
  }

  std::vector<std::string> head_vars;
  head_vars.reserve(r.arity);
  for (int i = 0; i < r.arity; ++i) head_vars.push_back(gen.fresh());

  std::vector<GoalPtr> disjuncts;
  for (const auto* c : p.clauses_for(r)) {
    std::vector<GoalPtr> conjuncts;
    for (size_t i = 0; i < c->head_args.size(); ++i) {
      conjuncts.push_back(Goal::eq(Term::var(head_vars[i]), c->head_args[i]));
    }
    if (!c->body->as<Goal::True>()) conjuncts.push_back(c->body);
    GoalPtr d = Goal::conj_fold(conjuncts);
    std::vector<std::string> vars = clause_vars(*c);
    for (size_t i = vars.size(); i-- > 0;) d = Goal::some(vars[i], d);
    disjuncts.push_back(d);
  }

  return DefinitionForm{r, std::move(head_vars), Goal::disj_fold(disjuncts)};
}

namespace {

void flatten_conj(const GoalPtr& g, std::vector<GoalPtr>& out) {
  if (const auto* a = g->as<Goal::And>()) {
    flatten_conj(a->left, out);
    flatten_conj(a->right, out);
  } else {
    out.push_back(g);
  }
}

void flatten_disj(const GoalPtr& g, std::vector<GoalPtr>& out) {
  if (const auto* o = g->as<Goal::Or>()) {
    flatten_disj(o->left, out);
    flatten_disj(o->right, out);
  } else {
    out.push_back(g);
  }
}

GoalPtr simplify_disjunct(GoalPtr d, const std::vector<std::string>& head_vars) {
  std::vector<std::string> binders;
  while (const auto* s = d->as<Goal::Some>()) {
    binders.push_back(s->var);
    d = s->body;
  }

  std::vector<GoalPtr> conjuncts;
  flatten_conj(d, conjuncts);

  std::set<std::string> bound(binders.begin(), binders.end());
  for (size_t i = 0; i < conjuncts.size(); ++i) {
    const auto* eq = conjuncts[i]->as<Goal::Eq>();
    if (!eq) continue;
    const auto* lhs = eq->lhs->as_var();
    const auto* rhs = eq->rhs->as_var();
    if (!lhs || !rhs) continue;
    if (std::find(head_vars.begin(), head_vars.end(), lhs->name) == head_vars.end())
      continue;
    if (!bound.count(rhs->name)) continue;
    // x_i = v with v existentially bound: substitute v := x_i, drop the
    // equation and v's binder.
    std::map<std::string, TermPtr> binding{{rhs->name, eq->lhs}};
    for (size_t j = 0; j < conjuncts.size(); ++j) {
      if (j != i) conjuncts[j] = substitute(conjuncts[j], binding);
    }
    bound.erase(rhs->name);
    binders.erase(std::remove(binders.begin(), binders.end(), rhs->name), binders.end());
    conjuncts.erase(conjuncts.begin() + static_cast<long>(i));
    --i;
  }

  GoalPtr out = Goal::conj_fold(conjuncts);
  for (size_t i = binders.size(); i-- > 0;) out = Goal::some(binders[i], out);
  return out;
}

} // namespace

DefinitionForm simplify_definition(const DefinitionForm& d) {
  if (d.body->as<Goal::Fail>()) return d;
  std::vector<GoalPtr> disjuncts;
  flatten_disj(d.body, disjuncts);
  for (auto& dis : disjuncts) dis = simplify_disjunct(dis, d.head_vars);
  return DefinitionForm{d.pred, d.head_vars, Goal::disj_fold(disjuncts)};
}

DependencyInfo dependency_info(const Program& p) {
  DependencyInfo info;
  for (const auto& pred : p.predicates) info.calls[pred];  // ensure every node
  for (const auto& c : p.clauses) {
    std::vector<PredId> called;
    collect_called_preds(c.body, called);
    for (const auto& q : called) info.calls[c.pred].insert(q);
  }

  // Tarjan over p.predicates in declaration order.
  std::map<PredId, int> index, low;
  std::map<PredId, bool> on_stack;
  std::vector<PredId> stack;
  int counter = 0;

  std::function<void(const PredId&)> visit = [&](const PredId& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& w : info.calls.at(v)) {
      if (!info.calls.count(w)) continue;  // calls to predicates outside p
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<PredId> scc;
      for (;;) {
        PredId w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        scc.push_back(w);
        if (w == v) break;
      }
      std::reverse(scc.begin(), scc.end());
      info.sccs.push_back(std::move(scc));
    }
  };

  for (const auto& pred : p.predicates) {
    if (!index.count(pred)) visit(pred);
  }
  return info;
}

bool is_directly_recursive(const DependencyInfo& d, const PredId& r) {
  for (const auto& scc : d.sccs) {
    if (std::find(scc.begin(), scc.end(), r) != scc.end()) {
      return scc.size() == 1;
    }
  }
  return false;
}

} // namespace starkc
