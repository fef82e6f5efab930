#include "starkc/sft.hpp"

namespace starkc {

FormulaPtr s_of(const GoalPtr& g) {
  return std::visit(
      overloaded{
          [](const Goal::True&) { return Formula::top(); },
          [](const Goal::Fail&) { return Formula::bot(); },
          [](const Goal::Eq& x) { return Formula::eq(x.lhs, x.rhs); },
          [](const Goal::Atom& x) {
            return Formula::pred(x.pred, Mode::Succeeds, x.args);
          },
          [](const Goal::Naf& x) { return f_of(x.inner); },
          [](const Goal::And& x) { return Formula::and_(s_of(x.left), s_of(x.right)); },
          [](const Goal::Or& x) { return Formula::or_(s_of(x.left), s_of(x.right)); },
          [](const Goal::Some& x) { return Formula::exists(x.var, s_of(x.body)); },
      },
      g->node());
}

FormulaPtr f_of(const GoalPtr& g) {
  return std::visit(
      overloaded{
          [](const Goal::True&) { return Formula::bot(); },
          [](const Goal::Fail&) { return Formula::top(); },
          [](const Goal::Eq& x) { return Formula::not_(Formula::eq(x.lhs, x.rhs)); },
          [](const Goal::Atom& x) {
            return Formula::pred(x.pred, Mode::Fails, x.args);
          },
          [](const Goal::Naf& x) { return s_of(x.inner); },
          [](const Goal::And& x) { return Formula::or_(f_of(x.left), f_of(x.right)); },
          [](const Goal::Or& x) { return Formula::and_(f_of(x.left), f_of(x.right)); },
          [](const Goal::Some& x) { return Formula::forall(x.var, f_of(x.body)); },
      },
      g->node());
}

FormulaPtr t_of(const GoalPtr& g) {
  return std::visit(
      overloaded{
          [](const Goal::True&) { return Formula::top(); },
          [](const Goal::Fail&) { return Formula::top(); },
          [](const Goal::Eq&) { return Formula::top(); },
          [](const Goal::Atom& x) {
            return Formula::pred(x.pred, Mode::Terminates, x.args);
          },
          [](const Goal::Naf& x) {
            return Formula::and_(t_of(x.inner), gr_of_goal(x.inner));
          },
          [](const Goal::And& x) {
            return Formula::and_(t_of(x.left),
                                 Formula::or_(f_of(x.left), t_of(x.right)));
          },
          [](const Goal::Or& x) { return Formula::and_(t_of(x.left), t_of(x.right)); },
          [](const Goal::Some& x) { return Formula::forall(x.var, t_of(x.body)); },
      },
      g->node());
}

FormulaPtr gr_of_term(const TermPtr& t) { return Formula::gr(t); }

FormulaPtr gr_of_goal(const GoalPtr& g) {
  return std::visit(
      overloaded{
          [](const Goal::True&) { return Formula::top(); },
          [](const Goal::Fail&) { return Formula::top(); },
          [](const Goal::Eq& x) {
            return Formula::and_(gr_of_term(x.lhs), gr_of_term(x.rhs));
          },
          [](const Goal::Atom& x) {
            std::vector<FormulaPtr> parts;
            parts.reserve(x.args.size());
            for (const auto& t : x.args) parts.push_back(gr_of_term(t));
            return Formula::and_fold(parts);
          },
          [](const Goal::Naf& x) { return gr_of_goal(x.inner); },
          [](const Goal::And& x) {
            return Formula::and_(gr_of_goal(x.left), gr_of_goal(x.right));
          },
          [](const Goal::Or& x) {
            return Formula::and_(gr_of_goal(x.left), gr_of_goal(x.right));
          },
          [](const Goal::Some& x) { return Formula::exists(x.var, gr_of_goal(x.body)); },
      },
      g->node());
}

namespace {

bool is_top(const FormulaPtr& f) { return f->as<Formula::Top>() != nullptr; }
bool is_bot(const FormulaPtr& f) { return f->as<Formula::Bot>() != nullptr; }

} // namespace

FormulaPtr simplify_units(const FormulaPtr& f) {
  return std::visit(
      overloaded{
          [&](const Formula::Top&) { return f; },
          [&](const Formula::Bot&) { return f; },
          [&](const Formula::Eq&) { return f; },
          [&](const Formula::Pred&) { return f; },
          [&](const Formula::Gr&) { return f; },
          [](const Formula::Not& x) {
            FormulaPtr i = simplify_units(x.inner);
            if (is_top(i)) return Formula::bot();
            if (is_bot(i)) return Formula::top();
            return Formula::not_(i);
          },
          [](const Formula::And& x) {
            FormulaPtr l = simplify_units(x.left), r = simplify_units(x.right);
            if (is_bot(l) || is_bot(r)) return Formula::bot();
            if (is_top(l)) return r;
            if (is_top(r)) return l;
            return Formula::and_(l, r);
          },
          [](const Formula::Or& x) {
            FormulaPtr l = simplify_units(x.left), r = simplify_units(x.right);
            if (is_top(l) || is_top(r)) return Formula::top();
            if (is_bot(l)) return r;
            if (is_bot(r)) return l;
            return Formula::or_(l, r);
          },
          [](const Formula::Implies& x) {
            FormulaPtr l = simplify_units(x.left), r = simplify_units(x.right);
            if (is_bot(l) || is_top(r)) return Formula::top();
            if (is_top(l)) return r;
            if (is_bot(r)) return Formula::not_(l);
            return Formula::implies(l, r);
          },
          [](const Formula::Iff& x) {
            FormulaPtr l = simplify_units(x.left), r = simplify_units(x.right);
            if (is_top(l)) return r;
            if (is_top(r)) return l;
            if (is_bot(l)) return is_bot(r) ? Formula::top() : Formula::not_(r);
            if (is_bot(r)) return Formula::not_(l);
            return Formula::iff(l, r);
          },
          [](const Formula::Forall& x) {
            FormulaPtr b = simplify_units(x.body);
            if (is_top(b) || is_bot(b)) return b;  // nonempty domains
            return Formula::forall(x.var, b);
          },
          [](const Formula::Exists& x) {
            FormulaPtr b = simplify_units(x.body);
            if (is_top(b) || is_bot(b)) return b;
            return Formula::exists(x.var, b);
          },
      },
      f->node());
}

} // namespace starkc
