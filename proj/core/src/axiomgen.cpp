#include "starkc/axiomgen.hpp"

#include "starkc/sft.hpp"

#include <algorithm>

namespace starkc {

namespace {

std::string seq_name(const std::string& base, int k) {
  return k == 1 ? base : base + "_" + std::to_string(k);
}

std::vector<std::string> numbered(const std::string& stem, int n, int from = 1) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(from + i));
  return out;
}

std::vector<TermPtr> as_vars(const std::vector<std::string>& names) {
  std::vector<TermPtr> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(Term::var(n));
  return out;
}

} // namespace

std::vector<NamedFormula> cet_axioms(const std::vector<Functor>& signature) {
  std::vector<NamedFormula> out;
  int inj = 0;
  for (const auto& f : signature) {
    if (f.arity == 0) continue;
    std::vector<std::string> xs = numbered("x", f.arity);
    std::vector<std::string> ys = numbered("y", f.arity);
    for (int i = 0; i < f.arity; ++i) {
      std::vector<std::string> all = xs;
      all.insert(all.end(), ys.begin(), ys.end());
      FormulaPtr body = Formula::implies(
          Formula::eq(Term::app(f.name, as_vars(xs)), Term::app(f.name, as_vars(ys))),
          Formula::eq(Term::var(xs[i]), Term::var(ys[i])));
      out.push_back(NamedFormula{seq_name("id1", ++inj), NamedFormula::Role::Axiom,
                                 Formula::forall_many(all, body)});
    }
  }
  int dis = 0;
  for (size_t i = 0; i < signature.size(); ++i) {
    for (size_t j = i + 1; j < signature.size(); ++j) {
      const Functor& f = signature[i];
      const Functor& g = signature[j];
      std::vector<std::string> xs = numbered("x", f.arity);
      std::vector<std::string> ys = numbered("y", g.arity);
      std::vector<std::string> all = xs;
      all.insert(all.end(), ys.begin(), ys.end());
      FormulaPtr body = Formula::not_(
          Formula::eq(Term::app(f.name, as_vars(xs)), Term::app(g.name, as_vars(ys))));
      out.push_back(NamedFormula{seq_name("id2", ++dis), NamedFormula::Role::Axiom,
                                 Formula::forall_many(all, body)});
    }
  }
  return out;
}

std::vector<NamedFormula> gr_axioms(const std::vector<Functor>& signature) {
  std::vector<NamedFormula> out;
  int consts = 0;
  for (const auto& f : signature) {
    if (f.arity != 0) continue;
    out.push_back(NamedFormula{seq_name("id4", ++consts), NamedFormula::Role::Axiom,
                               Formula::gr(Term::constant(f.name))});
  }
  int funcs = 0;
  for (const auto& f : signature) {
    if (f.arity == 0) continue;
    std::vector<std::string> xs = numbered("x", f.arity);
    std::vector<FormulaPtr> grs;
    grs.reserve(xs.size());
    for (const auto& x : xs) grs.push_back(Formula::gr(Term::var(x)));
    FormulaPtr body =
        Formula::iff(Formula::and_fold(grs), Formula::gr(Term::app(f.name, as_vars(xs))));
    out.push_back(NamedFormula{seq_name("id5", ++funcs), NamedFormula::Role::Axiom,
                               Formula::forall_many(xs, body)});
  }
  return out;
}

std::map<PredId, std::string> predicate_tags(const std::vector<PredId>& preds) {
  std::map<PredId, std::string> out;
  for (const auto& p : preds) {
    std::string tag;
    for (size_t len = 1; len <= p.name.size(); ++len) {
      std::string cand = p.name.substr(0, len);
      bool unique = true;
      for (const auto& q : preds) {
        if (q == p) continue;
        if (q.name.compare(0, len, cand) == 0) {
          unique = false;
          break;
        }
      }
      if (unique) {
        tag = cand;
        break;
      }
    }
    if (tag.empty()) {
      // Same name at several arities: disambiguate with the arity.
      tag = p.name + "_" + std::to_string(p.arity);
    }
    out[p] = tag;
  }
  return out;
}

std::vector<NamedFormula> uniq_total_axioms(const PredId& r, const std::string& tag) {
  std::vector<std::string> xs = numbered("x", r.arity);
  FormulaPtr rs = Formula::pred(r, Mode::Succeeds, as_vars(xs));
  FormulaPtr rf = Formula::pred(r, Mode::Fails, as_vars(xs));
  FormulaPtr rt = Formula::pred(r, Mode::Terminates, as_vars(xs));
  std::vector<NamedFormula> out;
  out.push_back(NamedFormula{"id" + tag + "6", NamedFormula::Role::Axiom,
                             Formula::forall_many(xs, Formula::not_(Formula::and_(rs, rf)))});
  out.push_back(NamedFormula{"id" + tag + "7", NamedFormula::Role::Axiom,
                             Formula::forall_many(xs, Formula::implies(rt, Formula::or_(rs, rf)))});
  return out;
}

std::vector<NamedFormula> uniq_total_axioms(const PredId& r) {
  return uniq_total_axioms(r, predicate_tags({r}).at(r));
}

std::vector<NamedFormula> fixedpoint_axioms(const Program& p, const PredId& r,
                                            const std::string& tag) {
  DefinitionForm d = simplify_definition(completed_definition(p, r));
  std::vector<TermPtr> head = as_vars(d.head_vars);
  auto axiom = [&](char mode_letter, Mode mode, FormulaPtr rhs) {
    return NamedFormula{
        "id" + tag + std::string(1, mode_letter) + "8", NamedFormula::Role::Axiom,
        Formula::forall_many(d.head_vars,
                             Formula::iff(Formula::pred(r, mode, head), std::move(rhs)))};
  };
  std::vector<NamedFormula> out;
  out.push_back(axiom('s', Mode::Succeeds, simplify_units(s_of(d.body))));
  out.push_back(axiom('f', Mode::Fails, simplify_units(f_of(d.body))));
  out.push_back(axiom('t', Mode::Terminates, simplify_units(t_of(d.body))));
  return out;
}

std::vector<NamedFormula> fixedpoint_axioms(const Program& p, const PredId& r) {
  return fixedpoint_axioms(p, r, predicate_tags({r}).at(r));
}

// ---------------------------------------------------------------------------
// Induction

namespace {

struct NormalizedConjecture {
  std::vector<std::string> vars;      // prenex-universal prefix, outermost first
  std::vector<FormulaPtr> premises;   // flattened antecedent conjuncts
  FormulaPtr goal;
};

void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (const auto* a = f->as<Formula::And>()) {
    flatten_and(a->left, out);
    flatten_and(a->right, out);
  } else {
    out.push_back(f);
  }
}

// Pulls universal quantifiers and implications apart:
//   forall v. (A -> forall w. (B -> psi))  ~~>  vars [v,w], premises [A,B], psi.
// Inner binders clashing with names already collected are renamed apart.
NormalizedConjecture normalize_conjecture(FormulaPtr f) {
  NormalizedConjecture n;
  std::set<std::string> seen;
  for (;;) {
    if (const auto* fa = f->as<Formula::Forall>()) {
      std::string v = fa->var;
      FormulaPtr body = fa->body;
      if (seen.count(v)) {
        std::set<std::string> avoid = seen;
        for (const auto& w : all_var_names(body)) avoid.insert(w);
        std::string nv;
        for (int i = 1;; ++i) {
          nv = v + std::to_string(i);
          if (!avoid.count(nv)) break;
        }
        body = substitute(body, {{v, Term::var(nv)}});
        v = nv;
      }
      seen.insert(v);
      n.vars.push_back(v);
      f = body;
      continue;
    }
    if (const auto* im = f->as<Formula::Implies>()) {
      flatten_and(im->left, n.premises);
      f = im->right;
      continue;
    }
    break;
  }
  n.goal = f;
  return n;
}

bool eligible_premise(const FormulaPtr& premise, const Program& p,
                      const DependencyInfo& deps, std::string* why) {
  const auto* atom = premise->as<Formula::Pred>();
  if (!atom || atom->mode != Mode::Succeeds) {
    if (why) *why = "premise is not a succeeds atom";
    return false;
  }
  if (!p.has_predicate(atom->pred)) {
    if (why) *why = "premise predicate is not defined by the program";
    return false;
  }
  if (!is_directly_recursive(deps, atom->pred)) {
    if (why) *why = "premise predicate is mutually recursive";
    return false;
  }
  std::vector<std::string> names;
  for (const auto& t : atom->args) {
    const auto* v = t->as_var();
    if (!v) {
      if (why) *why = "premise arguments are not variables";
      return false;
    }
    if (std::find(names.begin(), names.end(), v->name) != names.end()) {
      if (why) *why = "premise arguments are not distinct variables";
      return false;
    }
    names.push_back(v->name);
  }
  return true;
}

// Replaces every succeeds-atom of r by (atom & phi(args)); phi is closed over
// its induction variables xs, so phi(args) is capture-correct wherever the
// atom occurs.
FormulaPtr graft_hypothesis(const FormulaPtr& f, const PredId& r,
                            const std::vector<std::string>& xs, const FormulaPtr& phi) {
  return std::visit(
      overloaded{
          [&](const Formula::Top&) { return f; },
          [&](const Formula::Bot&) { return f; },
          [&](const Formula::Eq&) { return f; },
          [&](const Formula::Gr&) { return f; },
          [&](const Formula::Pred& x) {
            if (x.pred != r || x.mode != Mode::Succeeds) return f;
            std::map<std::string, TermPtr> binding;
            for (size_t i = 0; i < xs.size(); ++i) binding[xs[i]] = x.args[i];
            return Formula::and_(f, substitute(phi, binding));
          },
          [&](const Formula::Not& x) {
            return Formula::not_(graft_hypothesis(x.inner, r, xs, phi));
          },
          [&](const Formula::And& x) {
            return Formula::and_(graft_hypothesis(x.left, r, xs, phi),
                                 graft_hypothesis(x.right, r, xs, phi));
          },
          [&](const Formula::Or& x) {
            return Formula::or_(graft_hypothesis(x.left, r, xs, phi),
                                graft_hypothesis(x.right, r, xs, phi));
          },
          [&](const Formula::Implies& x) {
            return Formula::implies(graft_hypothesis(x.left, r, xs, phi),
                                    graft_hypothesis(x.right, r, xs, phi));
          },
          [&](const Formula::Iff& x) {
            return Formula::iff(graft_hypothesis(x.left, r, xs, phi),
                                graft_hypothesis(x.right, r, xs, phi));
          },
          [&](const Formula::Forall& x) {
            return Formula::forall(x.var, graft_hypothesis(x.body, r, xs, phi));
          },
          [&](const Formula::Exists& x) {
            return Formula::exists(x.var, graft_hypothesis(x.body, r, xs, phi));
          },
      },
      f->node());
}

} // namespace

std::optional<NamedFormula> induction_axiom(const Program& p, const DependencyInfo& deps,
                                            const FormulaPtr& conjecture,
                                            std::optional<int> premise_index,
                                            std::string* why) {
  NormalizedConjecture n = normalize_conjecture(conjecture);
  if (n.premises.empty()) {
    if (why) *why = "conjecture has no premises";
    return std::nullopt;
  }

  size_t chosen = n.premises.size();
  if (premise_index) {
    int idx = *premise_index;
    if (idx < 1 || static_cast<size_t>(idx) > n.premises.size()) {
      if (why) {
        *why = "premise index " + std::to_string(idx) + " out of range (1.." +
               std::to_string(n.premises.size()) + ")";
      }
      return std::nullopt;
    }
    std::string reason;
    if (!eligible_premise(n.premises[idx - 1], p, deps, &reason)) {
      if (why) *why = "premise " + std::to_string(idx) + ": " + reason;
      return std::nullopt;
    }
    chosen = static_cast<size_t>(idx - 1);
  } else {
    for (size_t i = 0; i < n.premises.size(); ++i) {
      if (eligible_premise(n.premises[i], p, deps, nullptr)) {
        chosen = i;
        break;
      }
    }
    if (chosen == n.premises.size()) {
      if (why) *why = "no premise is a succeeds atom of a directly recursive predicate over distinct variables";
      return std::nullopt;
    }
  }

  const auto* atom = n.premises[chosen]->as<Formula::Pred>();
  const PredId r = atom->pred;
  std::vector<std::string> xs;
  xs.reserve(atom->args.size());
  for (const auto& t : atom->args) xs.push_back(t->as_var()->name);

  // phi := forall (vars \ xs) (remaining premises -> goal)
  std::vector<FormulaPtr> remaining;
  for (size_t i = 0; i < n.premises.size(); ++i) {
    if (i != chosen) remaining.push_back(n.premises[i]);
  }
  FormulaPtr inner = remaining.empty()
                         ? n.goal
                         : Formula::implies(Formula::and_fold(remaining), n.goal);
  std::vector<std::string> residual;
  for (const auto& v : n.vars) {
    if (std::find(xs.begin(), xs.end(), v) == xs.end()) residual.push_back(v);
  }
  FormulaPtr phi = Formula::forall_many(residual, inner);

  FormulaPtr sub = Formula::forall_many(
      xs, Formula::implies(Formula::pred(r, Mode::Succeeds, atom->args), phi));

  DefinitionForm d = simplify_definition(completed_definition(p, r));
  FormulaPtr body = simplify_units(s_of(d.body));
  std::map<std::string, TermPtr> to_xs;
  for (size_t i = 0; i < xs.size(); ++i) to_xs[d.head_vars[i]] = Term::var(xs[i]);
  body = substitute(body, to_xs);
  body = graft_hypothesis(body, r, xs, phi);
  FormulaPtr closed = Formula::forall_many(xs, Formula::implies(body, phi));

  return NamedFormula{"induction", NamedFormula::Role::Axiom,
                      Formula::implies(closed, sub)};
}

} // namespace starkc
