#include "chasegoal/chase.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

#include "chasegoal/errors.hpp"

namespace chasegoal {

namespace {

void check_limits(const Limits& limits, const Atom& fact, std::size_t size) {
  if (limits.max_depth != 0)
    for (Term t : fact.args)
      if (t.depth() > limits.max_depth)
        throw GuardError("DepthLimitExceeded", "term " + t.to_string() + " exceeds depth " +
                                                   std::to_string(limits.max_depth));
  if (limits.max_facts != 0 && size > limits.max_facts)
    throw GuardError("FactLimitExceeded", "more than " + std::to_string(limits.max_facts) + " facts");
}

void check_range_restricted(const Rule& r) {
  std::vector<Term> body_vars;
  for (const auto& b : r.body) collect_variables(b, body_vars);
  std::vector<Term> head_vars;
  collect_variables(r.head, head_vars);
  for (Term v : head_vars)
    if (std::find(body_vars.begin(), body_vars.end(), v) == body_vars.end())
      throw ContractError("UnsafeRule", "head variable " + v.to_string() + " does not occur in the body of " +
                                            r.to_string());
}

// Semi-naive windows for round `round` with atom k as the delta atom.
std::vector<StampRange> delta_windows(std::size_t n, std::size_t k, std::uint32_t round) {
  std::vector<StampRange> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < k)
      w[i] = {0, round - 1};
    else if (i == k)
      w[i] = {round - 1, round};
    else
      w[i] = {0, round};
  }
  return w;
}

// Calls f(substitution) for every match that uses at least one fact stamped
// round-1; every match is reported once. Round 1 also fires empty bodies.
template <class F>
void for_new_matches(const Rule& r, const Instance& instance, std::uint32_t round, F&& f) {
  if (r.body.empty()) {
    if (round == 1) f(Substitution{});
    return;
  }
  for (std::size_t k = 0; k < r.body.size(); ++k) {
    auto windows = delta_windows(r.body.size(), k, round);
    enumerate_matches(
        r.body, instance,
        [&](const Substitution& s) {
          f(s);
          return true;
        },
        {}, windows);
  }
}

/// Equivalence classes of ground terms with a compare_terms-minimal representative.
class Classes {
 public:
  Term find(Term t) const { return mu_.get(t).value_or(t); }

  /// Returns the representative that lost, if the union changed anything.
  std::optional<Term> unite(Term a, Term b) {
    Term ra = find(a);
    Term rb = find(b);
    if (ra == rb) return std::nullopt;
    Term winner = compare_terms(ra, rb) < 0 ? ra : rb;
    Term loser = winner == ra ? rb : ra;
    auto& wm = members(winner);
    auto& lm = members(loser);
    for (Term m : lm) mu_.set(m, winner);
    wm.insert(wm.end(), lm.begin(), lm.end());
    members_.erase(loser);
    return loser;
  }

  const TermMap& mu() const { return mu_; }

  std::map<Term, std::vector<Term>, TermLess> classes() const {
    std::map<Term, std::vector<Term>, TermLess> out;
    for (const auto& [rep, ms] : members_) {
      if (ms.size() < 2) continue;
      auto sorted = ms;
      std::sort(sorted.begin(), sorted.end(), TermLess{});
      out.emplace(rep, std::move(sorted));
    }
    return out;
  }

 private:
  std::vector<Term>& members(Term rep) {
    auto [it, inserted] = members_.try_emplace(rep);
    if (inserted) it->second.push_back(rep);
    return it->second;
  }

  TermMap mu_;
  std::unordered_map<Term, std::vector<Term>> members_;
};

}  // namespace

ChaseResult chase(const std::vector<Rule>& input_rules, const Instance& base, const ChaseOptions& options) {
  for (const auto& r : input_rules) {
    for (const auto& b : r.body) {
      if (b.is_equality())
        throw ContractError("BodyContractViolation", "equality in the body of " + r.to_string());
      for (Term t : b.args)
        if (!t.is_variable())
          throw ContractError("BodyContractViolation", "non-variable term in the body of " + r.to_string());
    }
    check_range_restricted(r);
  }

  std::vector<const Rule*> rules;
  for (const auto& r : input_rules) rules.push_back(&r);
  std::optional<std::mt19937_64> rng;
  if (options.scheduler_seed) {
    rng.emplace(*options.scheduler_seed);
    std::shuffle(rules.begin(), rules.end(), *rng);
  }

  ChaseResult result;
  Classes classes;
  Instance& inst = result.instance;
  const Limits& limits = options.limits;

  auto normalize = [&](const Atom& a) { return map_shallow(classes.mu(), a); };

  // Rewrites every fact mentioning one of the losing representatives.
  auto rewrite = [&](const std::vector<Term>& losers, std::uint32_t stamp) {
    for (Term loser : losers) {
      auto span = inst.with_term(loser);
      std::vector<FactId> ids(span.begin(), span.end());
      for (FactId id : ids) {
        if (!inst.alive(id)) continue;
        Atom old = inst.fact(id);
        inst.erase(old);
        Atom fresh = normalize(old);
        if (inst.insert(fresh, stamp)) {
          ++result.stats.derived_facts;
          if (options.record_derived) result.derived_log.push_back(fresh);
        }
      }
    }
  };

  std::vector<Term> losers;
  base.for_each([&](const Atom& f) {
    if (f.is_equality())
      if (auto l = classes.unite(f.args[0], f.args[1])) losers.push_back(*l);
  });
  base.for_each([&](const Atom& f) {
    if (!f.is_equality()) inst.insert(normalize(f), 0);
  });
  result.stats.merges += losers.size();

  for (std::uint32_t round = 1;; ++round) {
    ++result.stats.rounds;
    std::vector<std::pair<Term, Term>> equalities;
    std::vector<Atom> facts;
    for (const Rule* r : rules) {
      for_new_matches(*r, inst, round, [&](const Substitution& s) {
        ++result.stats.rule_applications;
        Atom head = substitute(s, r->head);
        if (head.is_equality()) {
          if (head.args[0] != head.args[1]) equalities.emplace_back(head.args[0], head.args[1]);
        } else {
          facts.push_back(std::move(head));
        }
      });
    }
    if (rng) {
      std::shuffle(equalities.begin(), equalities.end(), *rng);
      std::shuffle(facts.begin(), facts.end(), *rng);
    }

    losers.clear();
    for (auto [s, t] : equalities) {
      for (Term x : {s, t})
        if (limits.max_depth != 0 && x.depth() > limits.max_depth)
          throw GuardError("DepthLimitExceeded", "term " + x.to_string() + " exceeds depth " +
                                                     std::to_string(limits.max_depth));
      if (auto l = classes.unite(s, t)) losers.push_back(*l);
    }
    result.stats.merges += losers.size();
    rewrite(losers, round);

    bool changed = !losers.empty();
    for (const auto& f : facts) {
      Atom n = normalize(f);
      if (inst.contains(n)) continue;
      check_limits(limits, n, inst.size() + 1);
      inst.insert(n, round);
      ++result.stats.derived_facts;
      if (options.record_derived) result.derived_log.push_back(n);
      changed = true;
    }
    if (limits.max_facts != 0 && inst.size() > limits.max_facts)
      throw GuardError("FactLimitExceeded", "more than " + std::to_string(limits.max_facts) + " facts");
    if (!changed) break;
  }

  result.mu = classes.mu();
  result.classes = classes.classes();
  return result;
}

Instance naive_fixpoint(const std::vector<Rule>& rules, const Instance& base, const Limits& limits,
                        FixpointStats* stats) {
  for (const auto& r : rules) check_range_restricted(r);
  Instance inst;
  base.for_each([&](const Atom& f) { inst.insert(f, 0); });
  FixpointStats local;
  for (std::uint32_t round = 1;; ++round) {
    ++local.rounds;
    std::vector<Atom> found;
    for (const auto& r : rules)
      for_new_matches(r, inst, round, [&](const Substitution& s) { found.push_back(substitute(s, r.head)); });
    bool changed = false;
    for (const auto& f : found) {
      if (inst.contains(f)) continue;
      check_limits(limits, f, inst.size() + 1);
      inst.insert(f, round);
      ++local.derived_facts;
      changed = true;
    }
    if (!changed) break;
  }
  if (stats) *stats = local;
  return inst;
}

namespace {

bool all_constants(const Atom& a) {
  return std::all_of(a.args.begin(), a.args.end(), [](Term t) { return t.is_constant(); });
}

void product(const std::vector<std::vector<std::string>>& options, Tuple& current, AnswerSet& out) {
  if (current.size() == options.size()) {
    out.insert(current);
    return;
  }
  for (const auto& o : options[current.size()]) {
    current.push_back(o);
    product(options, current, out);
    current.pop_back();
  }
}

}  // namespace

AnswerSet extract_answers(const ChaseResult& result, Pred query) {
  AnswerSet out;
  for (FactId id : result.instance.with_predicate(query)) {
    if (!result.instance.alive(id)) continue;
    const Atom& f = result.instance.fact(id);
    if (!all_constants(f)) continue;
    std::vector<std::vector<std::string>> options;
    for (Term a : f.args) {
      std::vector<std::string> names;
      if (auto it = result.classes.find(a); it != result.classes.end()) {
        for (Term m : it->second)
          if (m.is_constant()) names.push_back(m.name());
      } else {
        names.push_back(a.name());
      }
      options.push_back(std::move(names));
    }
    Tuple current;
    product(options, current, out);
  }
  return out;
}

AnswerSet answers_in(const Instance& instance, Pred query) {
  AnswerSet out;
  for (FactId id : instance.with_predicate(query)) {
    if (!instance.alive(id)) continue;
    const Atom& f = instance.fact(id);
    if (!all_constants(f)) continue;
    Tuple t;
    for (Term a : f.args) t.push_back(a.name());
    out.insert(std::move(t));
  }
  return out;
}

std::string format_answers(const AnswerSet& answers) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : answers) {
    if (!first) out += ", ";
    first = false;
    out += "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out += ",";
      out += t[i];
    }
    out += ")";
  }
  return out + "}";
}

}  // namespace chasegoal
