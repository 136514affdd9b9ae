#pragma once

// Relevance analysis: evaluate the program on a finite abstraction of the base
// instance, then chain backwards from the query facts to find the rules that
// take part in some derivation. Under UNA, body equalities only ever matched as
// c ≈ c are dropped and their variable substituted away.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "chasegoal/chase.hpp"
#include "chasegoal/frontend.hpp"
#include "chasegoal/kernel.hpp"

namespace chasegoal {

/// Constant standing for every base-instance constant not mentioned in the
/// program; typed instances use one per sort.
Term star_constant();
Term star_constant(const std::string& sort);

/// Predicates (with arities) that occur in the instance.
Signature signature_of(const Instance& instance);

/// All tuples over the program's constants plus the star for every predicate of
/// the signature. With a schema, each sorted position only receives the star of
/// its sort and the constants of that sort (constants of unknown sort go
/// everywhere). Throws SortMismatch when a program constant has two sorts.
Instance critical_instance(const std::vector<Rule>& rules, const Signature& signature, const Schema* schema = nullptr);

/// Constant replacing the functional terms with outermost symbol f.
Term function_abstraction_constant(Symbol f);
/// Replaces every functional term (outermost first) by its abstraction constant.
std::vector<Rule> abstract_functions_to_constants(const std::vector<Rule>& rules);

enum class FunctionAbstraction {
  Auto,    ///< Try the program as is; on divergence retry with abstraction.
  Always,  ///< Abstract from the start.
  Never,   ///< Divergence is an error.
};

struct RelevanceConfig {
  bool una_known = false;
  /// Use the typed critical instance; requires a schema.
  const Schema* schema = nullptr;
  FunctionAbstraction abstraction = FunctionAbstraction::Auto;
  /// Guard for the fixpoint on the abstraction.
  Limits limits{16, 2'000'000};
};

struct RelevanceReport {
  Program program;
  /// Indices (into the input program) of the kept rules, in input order.
  std::vector<std::size_t> kept;
  bool function_abstraction = false;
  std::size_t abstraction_facts = 0;
  std::size_t fixpoint_facts = 0;
  std::size_t removed_equalities = 0;
};

/// Requires an ≈-safe program. Throws AbstractionFixpointDiverged when the
/// fixpoint guard trips and no (further) retry is allowed.
RelevanceReport relevance(const Program& program, const Instance& base, const RelevanceConfig& config = {});

}  // namespace chasegoal
