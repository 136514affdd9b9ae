#include "chasegoal/eqprep.hpp"

#include <algorithm>

namespace chasegoal {

namespace {

bool contains(const std::vector<Term>& v, Term t) { return std::find(v.begin(), v.end(), t) != v.end(); }

// Applies the query-rule rewrite in place; returns the equalities to append.
std::vector<Atom> split_query_head(Tgd& tgd, Pred query, FreshVariables& fresh) {
  std::vector<Atom> eqs;
  if (tgd.head.size() != 1 || tgd.head[0].pred != query) return eqs;
  for (Term& arg : tgd.head[0].args) {
    if (!arg.is_variable() || contains(tgd.existentials, arg)) continue;
    Term primed = fresh.next(arg.name());
    eqs.push_back(Atom::equal(arg, primed));
    arg = primed;
  }
  return eqs;
}

std::vector<Atom> singularize_body(const std::vector<Atom>& body, FreshVariables& fresh) {
  std::vector<Term> kept;
  std::vector<std::vector<Atom>> after(body.size());
  std::vector<Atom> renamed = body;
  for (std::size_t k = body.size(); k-- > 0;) {
    Atom& atom = renamed[k];
    if (atom.is_equality()) continue;
    for (std::size_t j = atom.args.size(); j-- > 0;) {
      Term t = atom.args[j];
      if (t.is_variable()) {
        if (!contains(kept, t)) {
          kept.push_back(t);
          continue;
        }
        Term v = fresh.next(t.name());
        after[k].push_back(Atom::equal(t, v));
        atom.args[j] = v;
      } else {
        Term v = fresh.next("x");
        after[k].push_back(Atom::equal(v, t));
        atom.args[j] = v;
      }
    }
    std::reverse(after[k].begin(), after[k].end());
  }
  std::vector<Atom> out;
  for (std::size_t k = 0; k < renamed.size(); ++k) {
    out.push_back(renamed[k]);
    out.insert(out.end(), after[k].begin(), after[k].end());
  }
  return out;
}

Atom generic_atom(Pred p) {
  std::vector<Term> args;
  for (std::size_t i = 0; i < p.arity(); ++i) args.push_back(Term::variable("x" + std::to_string(i + 1)));
  return Atom(p, std::move(args));
}

}  // namespace

std::vector<ExistentialRule> singularize(const std::vector<ExistentialRule>& rules, Pred query) {
  std::vector<ExistentialRule> out;
  out.reserve(rules.size());
  for (const auto& rule : rules) {
    ExistentialRule r = rule;
    FreshVariables fresh;
    std::vector<Term> vars;
    for (const auto& a : body_of(r)) collect_variables(a, vars);
    if (auto* tgd = std::get_if<Tgd>(&r)) {
      for (const auto& h : tgd->head) collect_variables(h, vars);
    } else {
      const auto& egd = std::get<Egd>(r);
      collect_variables(egd.lhs, vars);
      collect_variables(egd.rhs, vars);
    }
    for (Term v : vars) fresh.reserve(v);

    std::vector<Atom> query_eqs;
    if (auto* tgd = std::get_if<Tgd>(&r)) query_eqs = split_query_head(*tgd, query, fresh);
    auto& body = body_of(r);
    body = singularize_body(body, fresh);
    body.insert(body.end(), query_eqs.begin(), query_eqs.end());
    out.push_back(std::move(r));
  }
  return out;
}

std::string skolem_symbol(std::size_t rule_index, Term var) {
  return "sk_" + std::to_string(rule_index) + "_" + var.name();
}

Program skolemize(const std::vector<ExistentialRule>& rules, Pred query) {
  Program p;
  p.query = query;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (const auto* egd = std::get_if<Egd>(&rules[i])) {
      p.rules.push_back(Rule{Atom::equal(egd->lhs, egd->rhs), egd->body});
      continue;
    }
    const auto& tgd = std::get<Tgd>(rules[i]);
    std::vector<Term> body_vars;
    std::vector<Term> head_vars;
    for (const auto& a : tgd.body) collect_variables(a, body_vars);
    for (const auto& a : tgd.head) collect_variables(a, head_vars);
    std::vector<Term> frontier;
    for (Term v : body_vars)
      if (contains(head_vars, v)) frontier.push_back(v);
    Substitution sigma;
    for (Term y : tgd.existentials) sigma.set(y, Term::functional(skolem_symbol(i + 1, y), frontier));
    for (const auto& h : tgd.head) p.rules.push_back(Rule{substitute(sigma, h), tgd.body});
  }
  return p;
}

std::vector<Rule> reflexivity_axioms(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  for (Pred p : predicates_of(rules)) {
    Atom body = generic_atom(p);
    for (Term x : body.args) out.push_back(Rule{Atom::equal(x, x), {body}});
  }
  return out;
}

std::vector<Rule> congruence_axioms(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  Term y = Term::variable("y");
  for (Pred p : predicates_of(rules)) {
    Atom body = generic_atom(p);
    for (std::size_t i = 0; i < body.args.size(); ++i) {
      Atom head = body;
      head.args[i] = y;
      out.push_back(Rule{head, {body, Atom::equal(body.args[i], y)}});
    }
  }
  return out;
}

std::vector<Rule> sym_trans() {
  Term x = Term::variable("x");
  Term y = Term::variable("y");
  Term z = Term::variable("z");
  return {
      Rule{Atom::equal(x, y), {Atom::equal(y, x)}},
      Rule{Atom::equal(x, z), {Atom::equal(x, y), Atom::equal(y, z)}},
  };
}

bool eq_safe(const Rule& rule, std::string* why) {
  std::vector<Term> relational_vars;
  for (const auto& a : rule.body)
    if (!a.is_equality()) collect_variables(a, relational_vars);
  for (const auto& a : rule.body) {
    if (!a.is_equality()) continue;
    Term lhs = a.args[0];
    Term rhs = a.args[1];
    if (!lhs.is_variable() || !(rhs.is_variable() || rhs.is_ground())) {
      if (why) *why = "equality " + a.to_string() + " is not of the form x = y or x = ground";
      return false;
    }
    if (!contains(relational_vars, lhs) && !(rhs.is_variable() && contains(relational_vars, rhs))) {
      if (why) *why = "equality " + a.to_string() + " shares no variable with a relational body atom";
      return false;
    }
  }
  return true;
}

EqSafetyReport check_eq_safety(const std::vector<Rule>& rules) {
  EqSafetyReport report;
  for (const auto& r : rules) {
    std::string why;
    if (!eq_safe(r, &why)) {
      report.safe = false;
      report.violations.push_back(r.to_string() + ": " + why);
    }
  }
  return report;
}

}  // namespace chasegoal
