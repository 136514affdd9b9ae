#pragma once

// Shared fixtures for the unit and acceptance tests: the running example, a
// LUBM-like fixture, a stratified random scenario generator, and the naive
// oracle over the explicitly axiomatized program.

#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "chasegoal/chase.hpp"
#include "chasegoal/driver.hpp"
#include "chasegoal/eqprep.hpp"
#include "chasegoal/errors.hpp"
#include "chasegoal/frontend.hpp"

namespace chasegoal {

// gtest printers.
inline void PrintTo(Term t, std::ostream* os) { *os << t.to_string(); }
inline void PrintTo(Pred p, std::ostream* os) { *os << p.to_string() << "/" << p.arity(); }
inline void PrintTo(const Atom& a, std::ostream* os) { *os << a.to_string(); }
inline void PrintTo(const Rule& r, std::ostream* os) { *os << r.to_string(); }

}  // namespace chasegoal

namespace chasegoal::testing {

inline const char* kRunningExampleRules =
    "A(?x), R(?x,?y) -> Q(?x)\n"
    "S(?x,?z) -> R(?x,?y)\n"
    "R(?x,?y), S(?x,?x1), R(?x1,?y1) -> ?y = ?y1\n"
    "B(?x) -> T(?x,?y), A(?y)\n"
    "T(?x,?y) -> ?x = ?y\n";

inline Pred query_pred(std::size_t arity = 1) { return Pred::ordinary("Q", arity); }

inline Term c(const std::string& name) { return Term::constant(name); }
inline Term v(const std::string& name) { return Term::variable(name); }

inline std::string a(std::size_t i) { return "a" + std::to_string(i); }

/// {B(a1)} ∪ {S(a_{i-1}, a_i) | 2 ≤ i ≤ n}
inline Instance running_example_base(std::size_t n) {
  Instance b;
  b.insert(Atom(Pred::ordinary("B", 1), {c(a(1))}));
  for (std::size_t i = 2; i <= n; ++i) b.insert(Atom(Pred::ordinary("S", 2), {c(a(i - 1)), c(a(i))}));
  return b;
}

inline Scenario running_example(std::size_t n, bool una = true) {
  Scenario s;
  s.rules = parse_rules(kRunningExampleRules);
  s.query = query_pred();
  s.base = running_example_base(n);
  s.una_known = una;
  return s;
}

/// Three rules over students and courses; the query asks for the students of
/// one fixed course. `students` students take three courses each.
inline Scenario lubm_like(std::size_t students, std::size_t courses = 300) {
  Scenario s;
  s.rules = parse_rules(
      "takesCourse(?x,?c) -> Student(?x)\n"
      "Student(?x) -> memberOf(?x,?y)\n"
      "takesCourse(?x,?c), teacherOf(?p,?c) -> knows(?x,?p)\n"
      "takesCourse(?x,course42), Student(?x) -> Q(?x)\n");
  s.query = query_pred();
  Pred takes = Pred::ordinary("takesCourse", 2);
  Pred teaches = Pred::ordinary("teacherOf", 2);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pick(0, courses - 1);
  for (std::size_t st = 0; st < students; ++st)
    for (int k = 0; k < 3; ++k)
      s.base.insert(Atom(takes, {c("student" + std::to_string(st)), c("course" + std::to_string(pick(rng)))}));
  for (std::size_t co = 0; co < courses; ++co)
    s.base.insert(Atom(teaches, {c("prof" + std::to_string(co % 50)), c("course" + std::to_string(co))}));
  s.una_known = true;
  return s;
}

/// P ∪ Ref(P) ∪ [Cong(P)] ∪ ST
inline std::vector<Rule> axiomatized(const std::vector<Rule>& rules, bool congruence) {
  std::vector<Rule> out = rules;
  auto ref = reflexivity_axioms(rules);
  out.insert(out.end(), ref.begin(), ref.end());
  if (congruence) {
    auto cong = congruence_axioms(rules);
    out.insert(out.end(), cong.begin(), cong.end());
  }
  auto st = sym_trans();
  out.insert(out.end(), st.begin(), st.end());
  return out;
}

/// Least fixpoint of sk(Σ) ∪ Ref ∪ Cong ∪ ST on B; nullopt when the guard trips.
inline std::optional<Instance> congruence_oracle(const Scenario& s, const Limits& limits = {6, 200'000}) {
  Program sk = skolemize(s.rules, s.query);
  try {
    return naive_fixpoint(axiomatized(sk.rules, true), s.base, limits);
  } catch (const GuardError&) {
    return std::nullopt;
  }
}

/// Answers of sk(Σ) ∪ Ref ∪ Cong ∪ ST ∪ B.
inline std::optional<AnswerSet> oracle_answers(const Scenario& s, const Limits& limits = {6, 200'000}) {
  auto fix = congruence_oracle(s, limits);
  if (!fix) return std::nullopt;
  return answers_in(*fix, s.query);
}

/// Answers of P ∪ Ref(P) ∪ ST ∪ B for an already singularized program P.
inline std::optional<AnswerSet> answers_without_congruence(const std::vector<Rule>& rules, const Scenario& s,
                                                           const Limits& limits = {6, 200'000}) {
  try {
    return answers_in(naive_fixpoint(axiomatized(rules, false), s.base, limits), s.query);
  } catch (const GuardError&) {
    return std::nullopt;
  }
}

/// Single-head TGDs and EGDs read as logic rules, for comparison up to renaming.
inline Rule as_rule(const ExistentialRule& r) {
  if (const auto* e = std::get_if<Egd>(&r)) return Rule{Atom::equal(e->lhs, e->rhs), e->body};
  const auto& t = std::get<Tgd>(r);
  return Rule{t.head.at(0), t.body};
}

/// True iff the fixpoint equates no two distinct constants.
inline bool satisfies_una(const Instance& fixpoint) {
  bool ok = true;
  for (FactId id : fixpoint.with_predicate(Pred::equality())) {
    if (!fixpoint.alive(id)) continue;
    const Atom& f = fixpoint.fact(id);
    if (f.args[0].is_constant() && f.args[1].is_constant() && f.args[0] != f.args[1]) ok = false;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Random scenarios

struct GeneratorOptions {
  std::size_t max_rules = 6;
  std::size_t max_facts = 8;
  bool constants_in_rules = true;
  bool equalities = true;
};

/// Stratified scenario: predicates live on levels 0..2 and Q on level 3;
/// existential TGDs go strictly upward and other TGDs never go down, so
/// Skolem terms have bounded depth. At least one EGD and one Q rule.
class ScenarioGenerator {
 public:
  explicit ScenarioGenerator(std::uint64_t seed, GeneratorOptions options = {}) : rng_(seed), opt_(options) {}

  Scenario next(std::string* text_out = nullptr) {
    preds_.clear();
    for (int level = 0; level < 3; ++level) {
      int count = level == 0 ? 2 + coin(0.5) : 1 + coin(0.6);
      for (int k = 0; k < count; ++k) {
        std::string name = std::string(1, static_cast<char>('A' + preds_.size()));
        preds_.push_back({Pred::ordinary(name + std::to_string(level), uniform(1, 2)), level});
      }
    }
    std::size_t q_arity = coin(0.15) ? 0 : (coin(0.2) ? 2 : 1);
    Pred q = Pred::ordinary("Q", q_arity);

    std::string text;
    std::size_t rules = uniform(2, static_cast<int>(opt_.max_rules));
    std::size_t egd_at = uniform(1, static_cast<int>(rules) - 1);
    text += q_rule(q);
    for (std::size_t i = 1; i < rules; ++i) text += (opt_.equalities && i == egd_at) || (opt_.equalities && coin(0.2)) ? egd() : tgd();
    if (coin(0.3) && rules < opt_.max_rules) text += q_rule(q);

    Scenario s;
    s.rules = parse_rules(text);
    s.query = q;
    std::size_t facts = uniform(1, static_cast<int>(opt_.max_facts));
    for (std::size_t i = 0; i < facts; ++i) {
      const auto& [p, level] = pick_pred(coin(0.8) ? 0 : 1, true);
      (void)level;
      std::vector<Term> args;
      for (std::size_t j = 0; j < p.arity(); ++j) args.push_back(c("c" + std::to_string(uniform(1, 4))));
      s.base.insert(Atom(p, args));
    }
    // Keep the base inside the rules' signature.
    auto sig = signature_of(s.rules);
    Instance filtered;
    s.base.for_each([&](const Atom& f) {
      if (sig.count(f.pred.to_string())) filtered.insert(f);
    });
    s.base = std::move(filtered);
    if (text_out) *text_out = text;
    return s;
  }

 private:
  struct LeveledPred {
    Pred pred;
    int level;
  };

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  const LeveledPred& pick_pred(int max_level, bool exact = false) {
    std::vector<const LeveledPred*> pool;
    for (const auto& lp : preds_)
      if (exact ? lp.level == max_level : lp.level <= max_level) pool.push_back(&lp);
    return *pool[uniform(0, static_cast<int>(pool.size()) - 1)];
  }

  std::string var(int k) { return "?v" + std::to_string(k); }

  std::string term(std::vector<std::string>& used) {
    if (opt_.constants_in_rules && coin(0.1)) return "c" + std::to_string(uniform(1, 4));
    std::string x = var(uniform(0, 3));
    used.push_back(x);
    return x;
  }

  std::string atom_text(Pred p, const std::vector<std::string>& args) {
    std::string out = p.to_string();
    if (args.empty()) return out;
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
    return out + ")";
  }

  std::string body(int max_level, std::vector<std::string>& vars, bool strict_below = false) {
    std::string out;
    int atoms = uniform(1, 3);
    for (int i = 0; i < atoms; ++i) {
      int level = strict_below ? uniform(0, max_level - 1) : uniform(0, max_level);
      const auto& lp = pick_pred(level);
      std::vector<std::string> args;
      for (std::size_t j = 0; j < lp.pred.arity(); ++j) args.push_back(term(vars));
      out += (i ? ", " : "") + atom_text(lp.pred, args);
    }
    return out;
  }

  std::string pick_var(const std::vector<std::string>& vars) {
    return vars[uniform(0, static_cast<int>(vars.size()) - 1)];
  }

  std::string q_rule(Pred q) {
    std::vector<std::string> vars;
    std::string b = body(2, vars);
    while (vars.empty() && q.arity() > 0) {
      vars.clear();
      b = body(2, vars);
    }
    std::vector<std::string> args;
    for (std::size_t i = 0; i < q.arity(); ++i) args.push_back(pick_var(vars));
    return b + " -> " + atom_text(q, args) + "\n";
  }

  std::string tgd() {
    int level = uniform(1, 2);
    bool existential = coin(0.5);
    std::vector<std::string> vars;
    std::string b = body(level, vars, existential);
    std::string out = b + " -> ";
    int heads = coin(0.3) ? 2 : 1;
    for (int h = 0; h < heads; ++h) {
      const auto& lp = pick_pred(level, true);
      std::vector<std::string> args;
      for (std::size_t j = 0; j < lp.pred.arity(); ++j) {
        if (existential && (vars.empty() || coin(0.5)))
          args.push_back("?e");
        else if (!vars.empty())
          args.push_back(pick_var(vars));
        else
          args.push_back("c" + std::to_string(uniform(1, 4)));
      }
      out += (h ? ", " : "") + atom_text(lp.pred, args);
    }
    return out + "\n";
  }

  std::string egd() {
    std::vector<std::string> vars;
    std::string b = body(2, vars);
    while (vars.empty()) {
      vars.clear();
      b = body(2, vars);
    }
    std::string lhs = pick_var(vars);
    std::string rhs = opt_.constants_in_rules && coin(0.1) ? "c" + std::to_string(uniform(1, 4)) : pick_var(vars);
    return b + " -> " + lhs + " = " + rhs + "\n";
  }

  std::mt19937_64 rng_;
  GeneratorOptions opt_;
  std::vector<LeveledPred> preds_;
};

}  // namespace chasegoal::testing
