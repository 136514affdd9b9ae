#pragma once

// Last rewriting steps before the chase: move constants and function terms out
// of rule bodies into Fun predicates, then eliminate body equalities.

#include <string>
#include <vector>

#include "chasegoal/kernel.hpp"

namespace chasegoal {

/// Body constant c becomes a fresh z with fun#c(z) (plus the fact fun#c(c));
/// body term f(s) becomes a fresh z with fun#f(s, z), innermost terms first.
/// The Fun atoms are placed just before the atom they were taken from. For
/// every head subterm f(s) whose symbol was removed from some body, the rule
/// fun#f(s, f(s)) :- body is added after the rule.
std::vector<Rule> defunctionalize(const std::vector<Rule>& rules);

/// Removes each body atom x = t, replacing x by t in the whole rule. Throws
/// NonVariableEqualityBody when an equality has no variable on its left.
std::vector<Rule> desingularize(const std::vector<Rule>& rules);
Rule desingularize(const Rule& rule);

/// True iff no body holds a constant, a function term or an equality.
bool chase_ready(const std::vector<Rule>& rules, std::string* why = nullptr);

}  // namespace chasegoal
