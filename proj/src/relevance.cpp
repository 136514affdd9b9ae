#include "chasegoal/relevance.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

#include "chasegoal/eqprep.hpp"
#include "chasegoal/errors.hpp"

namespace chasegoal {

Term star_constant() { return Term::constant("*"); }
Term star_constant(const std::string& sort) { return Term::constant("*:" + sort); }

Signature signature_of(const Instance& instance) {
  Signature sig;
  for (Pred p : instance.predicates())
    if (p.kind() == PredKind::Ordinary) sig.emplace(p.to_string(), p.arity());
  return sig;
}

namespace {

void collect_constants(Term t, std::vector<Term>& out) {
  if (t.is_constant()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (Term a : t.args()) collect_constants(a, out);
}

std::vector<Term> constants_of(const std::vector<Rule>& rules) {
  std::vector<Term> out;
  for (const auto& r : rules) {
    for (Term t : r.head.args) collect_constants(t, out);
    for (const auto& b : r.body)
      for (Term t : b.args) collect_constants(t, out);
  }
  std::sort(out.begin(), out.end(), TermLess{});
  return out;
}

using SortMap = std::map<Term, std::string, TermLess>;

void assign_sort(SortMap& sorts, Term c, const std::string& sort) {
  auto [it, inserted] = sorts.emplace(c, sort);
  if (!inserted && it->second != sort)
    throw InputError("SortMismatch", "constant " + c.to_string() + " is used with sorts " + it->second + " and " + sort);
}

// Sorts of program constants, from sorted positions and from var = c atoms.
SortMap infer_sorts(const std::vector<Rule>& rules, const Schema& schema) {
  SortMap sorts;
  for (const auto& r : rules) {
    std::map<Term, std::string, TermLess> var_sorts;
    auto visit = [&](const Atom& a) {
      if (a.is_equality()) return;
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        auto s = schema.sort_of(a.pred, i);
        if (!s) continue;
        Term t = a.args[i];
        if (t.is_constant()) assign_sort(sorts, t, *s);
        if (t.is_variable()) var_sorts.emplace(t, *s);
      }
    };
    visit(r.head);
    for (const auto& b : r.body) visit(b);
    auto visit_eq = [&](const Atom& a) {
      if (!a.is_equality()) return;
      for (int side = 0; side < 2; ++side) {
        Term v = a.args[side];
        Term c = a.args[1 - side];
        if (!v.is_variable() || !c.is_constant()) continue;
        if (auto it = var_sorts.find(v); it != var_sorts.end()) assign_sort(sorts, c, it->second);
      }
    };
    visit_eq(r.head);
    for (const auto& b : r.body) visit_eq(b);
  }
  return sorts;
}

void all_tuples(const std::vector<std::vector<Term>>& domains, std::vector<Term>& current, Pred p, Instance& out) {
  if (current.size() == domains.size()) {
    out.insert(Atom(p, current));
    return;
  }
  for (Term t : domains[current.size()]) {
    current.push_back(t);
    all_tuples(domains, current, p, out);
    current.pop_back();
  }
}

Term abstract_term(Term t) {
  if (t.is_functional()) return function_abstraction_constant(t.symbol());
  return t;
}

Atom abstract_atom(const Atom& a) {
  Atom out = a;
  for (Term& t : out.args) t = abstract_term(t);
  return out;
}

bool is_abstraction_constant(Term t) { return t.is_constant() && t.name().starts_with("c#"); }

// Applies the UNA rewrite to rule r, dropping the given body positions.
Rule drop_equalities(const Rule& r, const std::vector<std::size_t>& positions, std::size_t& removed) {
  Rule out = r;
  std::vector<bool> drop(r.body.size(), false);
  for (std::size_t i : positions) drop[i] = true;
  // Walk the original positions; each substitution is applied to the whole rule.
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (!drop[i]) continue;
    const Atom& eq = out.body[i];
    Term lhs = eq.args[0];
    Term rhs = eq.args[1];
    Substitution s;
    if (lhs.is_variable()) {
      if (lhs != rhs) s.set(lhs, rhs);
    } else if (rhs.is_variable()) {
      s.set(rhs, lhs);
    } else if (lhs != rhs) {
      drop[i] = false;
      continue;
    }
    out = substitute(s, out);
    ++removed;
  }
  std::vector<Atom> body;
  for (std::size_t i = 0; i < out.body.size(); ++i)
    if (!drop[i]) body.push_back(out.body[i]);
  out.body = std::move(body);
  return out;
}

}  // namespace

Instance critical_instance(const std::vector<Rule>& rules, const Signature& signature, const Schema* schema) {
  auto constants = constants_of(rules);
  std::erase_if(constants, is_abstraction_constant);
  SortMap sorts;
  if (schema) sorts = infer_sorts(rules, *schema);
  Instance out;
  for (const auto& [name, arity] : signature) {
    Pred p = Pred::ordinary(name, arity);
    std::vector<std::vector<Term>> domains(arity);
    for (std::size_t i = 0; i < arity; ++i) {
      std::optional<std::string> sort = schema ? schema->sort_of(p, i) : std::nullopt;
      domains[i].push_back(sort ? star_constant(*sort) : star_constant());
      for (Term c : constants) {
        auto it = sorts.find(c);
        if (!sort || it == sorts.end() || it->second == *sort) domains[i].push_back(c);
      }
    }
    std::vector<Term> current;
    all_tuples(domains, current, p, out);
  }
  return out;
}

Term function_abstraction_constant(Symbol f) { return Term::constant("c#" + symbol_name(f)); }

std::vector<Rule> abstract_functions_to_constants(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  out.reserve(rules.size());
  for (const auto& r : rules) {
    Rule a{abstract_atom(r.head), {}};
    for (const auto& b : r.body) a.body.push_back(abstract_atom(b));
    out.push_back(std::move(a));
  }
  return out;
}

RelevanceReport relevance(const Program& program, const Instance& base, const RelevanceConfig& config) {
  if (auto safety = check_eq_safety(program.rules); !safety)
    throw ContractError("NotEqSafe", safety.violations.front());

  RelevanceReport report;
  Instance abstraction = critical_instance(program.rules, signature_of(base), config.schema);
  report.abstraction_facts = abstraction.size();

  std::vector<Rule> rules = program.rules;
  bool abstracted = config.abstraction == FunctionAbstraction::Always;
  if (abstracted) rules = abstract_functions_to_constants(rules);

  auto fixpoint_rules = [&] {
    std::vector<Rule> all = rules;
    auto ref = reflexivity_axioms(rules);
    auto st = sym_trans();
    all.insert(all.end(), ref.begin(), ref.end());
    all.insert(all.end(), st.begin(), st.end());
    return all;
  };

  Instance fixpoint;
  while (true) {
    try {
      fixpoint = naive_fixpoint(fixpoint_rules(), abstraction, config.limits);
      break;
    } catch (const GuardError& e) {
      if (abstracted || config.abstraction == FunctionAbstraction::Never)
        throw GuardError("AbstractionFixpointDiverged", e.what());
      abstracted = true;
      rules = abstract_functions_to_constants(program.rules);
    }
  }
  report.function_abstraction = abstracted;
  report.fixpoint_facts = fixpoint.size();

  // Backward chaining over P ∪ ST; ST rules get indices past the program.
  std::vector<Rule> sources = rules;
  for (auto& r : sym_trans()) sources.push_back(std::move(r));
  const std::size_t n = rules.size();

  Instance done;
  std::deque<Atom> todo;
  for (FactId id : fixpoint.with_predicate(program.query)) {
    if (!fixpoint.alive(id)) continue;
    const Atom& f = fixpoint.fact(id);
    bool constants_only = std::all_of(f.args.begin(), f.args.end(),
                                      [](Term t) { return t.is_constant() && !is_abstraction_constant(t); });
    if (constants_only && done.insert(f)) todo.push_back(f);
  }

  std::vector<bool> relevant(n, false);
  std::set<std::pair<std::size_t, std::size_t>> blocked;
  while (!todo.empty()) {
    Atom fact = std::move(todo.front());
    todo.pop_front();
    for (std::size_t ri = 0; ri < sources.size(); ++ri) {
      const Rule& r = sources[ri];
      if (r.head.pred != fact.pred) continue;
      Substitution seed;
      if (!match(r.head, fact, seed)) continue;
      enumerate_matches(
          r.body, fixpoint,
          [&](const Substitution& nu) {
            if (ri < n) relevant[ri] = true;
            for (std::size_t i = 0; i < r.body.size(); ++i) {
              Atom g = substitute(nu, r.body[i]);
              bool trivial = g.is_equality() && g.args[0] == g.args[1] && g.args[0].is_constant() &&
                             !is_abstraction_constant(g.args[0]);
              if (trivial && config.una_known) continue;
              if (done.insert(g)) todo.push_back(g);
              if (g.is_equality()) blocked.emplace(ri, i);
            }
            return true;
          },
          seed);
    }
  }

  report.program.query = program.query;
  for (std::size_t ri = 0; ri < n; ++ri) {
    if (!relevant[ri]) continue;
    report.kept.push_back(ri);
    const Rule& original = program.rules[ri];
    if (!config.una_known) {
      report.program.rules.push_back(original);
      continue;
    }
    std::vector<std::size_t> unblocked;
    for (std::size_t i = 0; i < original.body.size(); ++i) {
      const Atom& a = original.body[i];
      if (a.is_equality() && a.args[0].is_variable() && !blocked.count({ri, i})) unblocked.push_back(i);
    }
    report.program.rules.push_back(drop_equalities(original, unblocked, report.removed_equalities));
  }
  return report;
}

}  // namespace chasegoal
