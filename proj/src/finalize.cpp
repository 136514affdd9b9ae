#include "chasegoal/finalize.hpp"

#include <algorithm>
#include <set>

#include "chasegoal/errors.hpp"

namespace chasegoal {

namespace {

struct BodyRewriter {
  FreshVariables& fresh;
  std::vector<std::pair<Term, Term>> replaced;  // term -> variable, unique per rule
  std::vector<Atom> added;                      // Fun atoms for the current body atom
  std::vector<Term> new_constants;
  std::set<Symbol>& removed_functions;

  Term variable_for(Term t) {
    for (auto& [from, to] : replaced)
      if (from == t) return to;
    Term z = fresh.next("z");
    replaced.emplace_back(t, z);
    if (t.is_constant()) {
      added.push_back(Atom(Pred::fun(t.symbol(), 1), {z}));
      new_constants.push_back(t);
    } else {
      std::vector<Term> args(t.args().begin(), t.args().end());
      args.push_back(z);
      added.push_back(Atom(Pred::fun(t.symbol(), t.args().size() + 1), std::move(args)));
      removed_functions.insert(t.symbol());
    }
    return z;
  }

  // Innermost first: arguments are rewritten before the term itself.
  Term rewrite(Term t) {
    if (t.is_variable()) return t;
    if (t.is_constant()) return variable_for(t);
    std::vector<Term> args;
    for (Term a : t.args()) args.push_back(rewrite(a));
    return variable_for(Term::functional(t.symbol(), std::move(args)));
  }
};

void head_functional_subterms(Term t, std::vector<Term>& out) {
  if (!t.is_functional()) return;
  for (Term a : t.args()) head_functional_subterms(a, out);
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
}

}  // namespace

std::vector<Rule> defunctionalize(const std::vector<Rule>& rules) {
  std::set<Symbol> removed;
  std::vector<Rule> rewritten;
  std::vector<Term> constants;
  for (const auto& r : rules) {
    FreshVariables fresh(r);
    BodyRewriter rw{fresh, {}, {}, {}, removed};
    Rule out{r.head, {}};
    for (const auto& b : r.body) {
      Atom a = b;
      for (Term& t : a.args) t = rw.rewrite(t);
      out.body.insert(out.body.end(), rw.added.begin(), rw.added.end());
      rw.added.clear();
      out.body.push_back(std::move(a));
    }
    for (Term c : rw.new_constants)
      if (std::find(constants.begin(), constants.end(), c) == constants.end()) constants.push_back(c);
    rewritten.push_back(std::move(out));
  }

  std::vector<Rule> result;
  auto add = [&](Rule r) {
    if (std::find(result.begin(), result.end(), r) == result.end()) result.push_back(std::move(r));
  };
  for (const auto& r : rewritten) {
    add(r);
    std::vector<Term> subterms;
    for (Term t : r.head.args) head_functional_subterms(t, subterms);
    for (Term t : subterms) {
      if (!removed.count(t.symbol())) continue;
      std::vector<Term> args(t.args().begin(), t.args().end());
      args.push_back(t);
      add(Rule{Atom(Pred::fun(t.symbol(), t.args().size() + 1), std::move(args)), r.body});
    }
  }
  for (Term c : constants) add(Rule{Atom(Pred::fun(c.symbol(), 1), {c}), {}});
  return result;
}

Rule desingularize(const Rule& rule) {
  Rule out = rule;
  while (true) {
    auto it = std::find_if(out.body.begin(), out.body.end(), [](const Atom& a) { return a.is_equality(); });
    if (it == out.body.end()) return out;
    Term lhs = it->args[0];
    Term rhs = it->args[1];
    if (!lhs.is_variable())
      throw ContractError("NonVariableEqualityBody", "equality " + it->to_string() + " in " + rule.to_string());
    out.body.erase(it);
    if (lhs != rhs) {
      Substitution s;
      s.set(lhs, rhs);
      out = substitute(s, out);
    }
  }
}

std::vector<Rule> desingularize(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  out.reserve(rules.size());
  for (const auto& r : rules) out.push_back(desingularize(r));
  return out;
}

bool chase_ready(const std::vector<Rule>& rules, std::string* why) {
  for (const auto& r : rules)
    for (const auto& b : r.body) {
      bool bad = b.is_equality() ||
                 std::any_of(b.args.begin(), b.args.end(), [](Term t) { return !t.is_variable(); });
      if (bad) {
        if (why) *why = "body atom " + b.to_string() + " in " + r.to_string();
        return false;
      }
    }
  return true;
}

}  // namespace chasegoal
