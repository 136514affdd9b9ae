#pragma once

// The chase for logic programs (representative-based equality handling) and
// the plain least-fixpoint evaluator that treats ≈ as an ordinary predicate.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chasegoal/kernel.hpp"

namespace chasegoal {

/// Termination guards. Zero disables a guard.
struct Limits {
  unsigned max_depth = 20;
  std::size_t max_facts = 10'000'000;
};

struct ChaseStats {
  /// Every fact insertion, including facts re-inserted after a merge rewrote them.
  std::size_t derived_facts = 0;
  std::size_t rule_applications = 0;
  std::size_t rounds = 0;
  std::size_t merges = 0;
};

struct ChaseOptions {
  Limits limits;
  /// Permutes rule and match order; the result must not depend on it.
  std::optional<std::uint64_t> scheduler_seed;
  /// Keep every derived fact (before later rewriting) in ChaseResult::derived_log.
  bool record_derived = false;
};

struct ChaseResult {
  Instance instance;
  /// Non-representative term -> its representative; identity entries omitted.
  TermMap mu;
  /// Representative -> all members (itself included) of classes with two or more members.
  std::map<Term, std::vector<Term>, TermLess> classes;
  ChaseStats stats;
  std::vector<Atom> derived_log;

  Term representative(Term t) const { return mu.get(t).value_or(t); }
};

/// Requires bodies free of constants, function symbols and ≈ (BodyContractViolation).
ChaseResult chase(const std::vector<Rule>& rules, const Instance& base, const ChaseOptions& options = {});

struct FixpointStats {
  std::size_t derived_facts = 0;
  std::size_t rounds = 0;
};

/// Least fixpoint by semi-naive evaluation; ≈ is an ordinary binary predicate.
Instance naive_fixpoint(const std::vector<Rule>& rules, const Instance& base, const Limits& limits = {},
                        FixpointStats* stats = nullptr);

using Tuple = std::vector<std::string>;
using AnswerSet = std::set<Tuple>;

/// Constant tuples b with Q(μ(b)) in the chase result.
AnswerSet extract_answers(const ChaseResult& result, Pred query);
/// Constant tuples b with Q(b) in the instance.
AnswerSet answers_in(const Instance& instance, Pred query);

std::string format_answers(const AnswerSet& answers);

}  // namespace chasegoal
