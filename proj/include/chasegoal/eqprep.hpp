#pragma once

// Preparing existential rules for logic-programming evaluation: singularization,
// Skolemization, the explicit equality axioms, and the ≈-safety check.

#include <string>
#include <vector>

#include "chasegoal/kernel.hpp"

namespace chasegoal {

/// Makes every join and constant in relational body atoms explicit as a body
/// equality. Query-head TGDs first get one fresh head variable per argument
/// (`φ ∧ x ≈ x' → Q(x')`). Within a rule the last occurrence of a variable
/// (scanning atoms and positions right to left) keeps its name; every other
/// occurrence becomes a fresh `x#n` with `x ≈ x#n` placed right after the
/// renamed atom.
std::vector<ExistentialRule> singularize(const std::vector<ExistentialRule>& rules, Pred query);

/// Name of the Skolem symbol for existential `var` of the (1-based) rule index.
std::string skolem_symbol(std::size_t rule_index, Term var);

/// One logic rule per TGD head atom (existentials become `sk_<i>_<y>(frontier)`,
/// frontier in body-occurrence order) and one per EGD.
Program skolemize(const std::vector<ExistentialRule>& rules, Pred query);

/// `x_i ≈ x_i ← R(x_1..x_n)` for every non-equality predicate R and position i.
std::vector<Rule> reflexivity_axioms(const std::vector<Rule>& rules);
/// `R(.., y, ..) ← R(.., x_i, ..) ∧ x_i ≈ y` for every predicate and position.
std::vector<Rule> congruence_axioms(const std::vector<Rule>& rules);
/// Symmetry and transitivity.
std::vector<Rule> sym_trans();

struct EqSafetyReport {
  bool safe = true;
  std::vector<std::string> violations;

  explicit operator bool() const { return safe; }
};

/// Every body equality must be `x ≈ y` or `x ≈ s` with s ground, and one of its
/// variables must occur in a relational atom of the same body.
EqSafetyReport check_eq_safety(const std::vector<Rule>& rules);
bool eq_safe(const Rule& rule, std::string* why = nullptr);

}  // namespace chasegoal
