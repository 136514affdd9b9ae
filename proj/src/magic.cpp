#include "chasegoal/magic.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "chasegoal/eqprep.hpp"
#include "chasegoal/errors.hpp"

namespace chasegoal {

namespace {

bool contains(const std::vector<Term>& v, Term t) { return std::find(v.begin(), v.end(), t) != v.end(); }

bool all_bound(Term t, const std::vector<Term>& bound) {
  std::vector<Term> vars;
  collect_variables(t, vars);
  return std::all_of(vars.begin(), vars.end(), [&](Term v) { return contains(bound, v); });
}

std::vector<Term> restrict(const std::vector<Term>& args, const Adornment& a) {
  if (a.is_one_bound_eq()) throw ContractError("BadAdornment", "~b must be resolved to bf or fb first");
  std::vector<Term> out;
  for (std::size_t i = 0; i < args.size(); ++i)
    if (a.bound(i)) out.push_back(args[i]);
  return out;
}

bool binds(const Atom& eq, const std::vector<Term>& bound) {
  std::vector<Term> vars;
  collect_variables(eq, vars);
  return std::any_of(vars.begin(), vars.end(), [&](Term v) { return contains(bound, v); });
}

// Ordering for symmetry/transitivity: repeatedly take the first atom sharing a
// bound variable, letting equalities bind as well.
std::vector<Atom> chain_order(std::vector<Atom> body, std::vector<Term> bound) {
  std::vector<Atom> out;
  while (!body.empty()) {
    auto it = std::find_if(body.begin(), body.end(), [&](const Atom& a) { return binds(a, bound); });
    if (it == body.end()) it = body.begin();
    collect_variables(*it, bound);
    out.push_back(*it);
    body.erase(it);
  }
  return out;
}

class Transformer {
 public:
  Transformer(const Program& program, const SipsConfig& sips)
      : program_(program), sips_(sips), heads_(head_predicates(program.rules)) {}

  MagicReport run() {
    Pred q = program_.query;
    Pred seed = magic_predicate(q, Adornment::all_free(q.arity()));
    report_.program.query = q;
    add(Rule{Atom(seed, {}), {}});
    enqueue(seed);
    auto st = sym_trans();
    while (!todo_.empty()) {
      Pred m = todo_.front();
      todo_.pop_front();
      Pred base = m.base();
      const Adornment& alpha = m.adornment();
      auto visit = [&](const Rule& r, bool sym_trans_rule) {
        if (r.head.pred != base) return;
        if (base.is_equality() && alpha.is_one_bound_eq()) {
          process(r, m, Adornment("bf"), sym_trans_rule);
          process(r, m, Adornment("fb"), sym_trans_rule);
        } else {
          process(r, m, alpha, sym_trans_rule);
        }
      };
      for (const auto& r : program_.rules) visit(r, false);
      if (sips_.explicit_sym_trans && base.is_equality())
        for (const auto& r : st) visit(r, true);
    }
    return std::move(report_);
  }

 private:
  void enqueue(Pred m) {
    if (done_.insert(m).second) todo_.push_back(m);
  }

  bool add(Rule r) {
    for (const auto& existing : report_.program.rules)
      if (existing == r) return false;
    report_.program.rules.push_back(std::move(r));
    return true;
  }

  void process(const Rule& r, Pred m, const Adornment& beta, bool sym_trans_rule) {
    ++report_.process_calls;
    std::vector<Term> passed = restrict(r.head.args, beta);
    Atom guard(m, passed);

    Rule modified{r.head, {guard}};
    modified.body.insert(modified.body.end(), r.body.begin(), r.body.end());
    if (add(std::move(modified))) ++report_.modified_rules;

    std::vector<Term> bound;
    for (Term t : passed) collect_variables(t, bound);
    std::vector<Atom> body = sym_trans_rule ? chain_order(r.body, bound) : reorder(r.body, bound);

    std::vector<Atom> prefix{guard};
    for (const Atom& atom : body) {
      bool eligible = atom.is_equality() || std::find(heads_.begin(), heads_.end(), atom.pred) != heads_.end();
      if (eligible) {
        Adornment gamma = adorn(atom, bound);
        Pred s = magic_predicate(atom.pred, gamma);
        std::vector<Term> args;
        if (gamma.is_one_bound_eq())
          args.push_back(all_bound(atom.args[0], bound) ? atom.args[0] : atom.args[1]);
        else
          args = restrict(atom.args, gamma);
        Atom head(s, std::move(args));
        bool tautology = std::find(prefix.begin(), prefix.end(), head) != prefix.end();
        if (!tautology && add(Rule{head, prefix})) ++report_.magic_rules;
        enqueue(s);
      }
      prefix.push_back(atom);
      collect_variables(atom, bound);
    }
  }

  const Program& program_;
  SipsConfig sips_;
  std::vector<Pred> heads_;
  std::deque<Pred> todo_;
  std::unordered_set<Pred> done_;
  MagicReport report_;
};

}  // namespace

Adornment adorn(const Atom& atom, const std::vector<Term>& bound) {
  std::string pattern;
  for (Term t : atom.args) pattern += all_bound(t, bound) ? 'b' : 'f';
  if (atom.is_equality()) {
    if (pattern == "ff")
      throw ContractError("EqualityAdornedFree", "no argument of " + atom.to_string() + " is bound");
    if (pattern != "bb") return Adornment::one_bound_eq();
  }
  return Adornment(pattern);
}

Pred magic_predicate(Pred p, const Adornment& adornment) {
  if (p.is_equality() && (adornment.str() == "bf" || adornment.str() == "fb"))
    return Pred::magic(p, Adornment::one_bound_eq());
  return Pred::magic(p, adornment);
}

std::vector<Atom> reorder(const std::vector<Atom>& body, const std::vector<Term>& bound) {
  std::vector<Atom> out;
  std::vector<const Atom*> pending;
  for (const auto& a : body) {
    if (!a.is_equality()) continue;
    if (binds(a, bound))
      out.push_back(a);
    else
      pending.push_back(&a);
  }
  std::vector<Term> relational_vars;
  for (const auto& a : body) {
    if (a.is_equality()) continue;
    out.push_back(a);
    collect_variables(a, relational_vars);
    std::erase_if(pending, [&](const Atom* eq) {
      if (!binds(*eq, relational_vars)) return false;
      out.push_back(*eq);
      return true;
    });
  }
  if (!pending.empty())
    throw ContractError("NoAdmissibleOrdering", "equality " + pending.front()->to_string() +
                                                    " shares no variable with the bound terms or a relational atom");
  return out;
}

MagicReport magic(const Program& program, const SipsConfig& sips) {
  for (const auto& r : program.rules)
    for (const auto& b : r.body)
      if (b.pred == program.query) throw ContractError("QueryInBody", "query predicate in the body of " + r.to_string());
  return Transformer(program, sips).run();
}

}  // namespace chasegoal
