#pragma once

// Magic sets with the equality-specific adornments bb and ~b (one side bound;
// bf and fb share a magic predicate since ≈ is symmetric).

#include <cstddef>
#include <vector>

#include "chasegoal/kernel.hpp"

namespace chasegoal {

/// Position j is bound iff vars(t_j) ⊆ bound. For ≈, bf/fb become ~b; ff is
/// rejected with EqualityAdornedFree.
Adornment adorn(const Atom& atom, const std::vector<Term>& bound);

/// Magic predicate for base predicate p under an adornment (bf/fb of ≈ mapped to ~b).
Pred magic_predicate(Pred p, const Adornment& adornment);

/// Body ordering in which every equality has a variable in `bound` or in an
/// earlier relational atom: equalities bound by `bound` first, then relational
/// atoms in their original order, each followed by the equalities it binds.
/// Throws NoAdmissibleOrdering when some equality is never bound.
std::vector<Atom> reorder(const std::vector<Atom>& body, const std::vector<Term>& bound);

struct SipsConfig {
  /// Also run symmetry and transitivity through the transformation, ordering
  /// their bodies as a chain from the bound side and letting equalities bind
  /// (transitivity has no admissible ordering otherwise). This adds
  /// m_=#~b(y) :- m_=#~b(x), x = y style propagation, which the chase gets
  /// for free from its classes but a congruence-free evaluation needs. The
  /// resulting transitivity rules are not ≈-safe, so this is an evaluation aid
  /// and never part of the pipeline.
  bool explicit_sym_trans = false;
};

struct MagicReport {
  Program program;
  std::size_t modified_rules = 0;
  std::size_t magic_rules = 0;
  std::size_t process_calls = 0;
};

/// Requires an ≈-safe program whose query predicate does not occur in bodies.
MagicReport magic(const Program& program, const SipsConfig& sips = {});

}  // namespace chasegoal
