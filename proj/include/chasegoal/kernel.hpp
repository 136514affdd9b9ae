#pragma once

// Core term/atom/rule model shared by every stage of the pipeline.
//
// Terms and predicates are hash-consed into process-wide tables, so a Term or
// Pred is a 32-bit handle and structural equality is handle equality. The
// tables only grow; creating terms is not thread-safe, reading them is.

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace chasegoal {

using Symbol = std::uint32_t;

Symbol intern(std::string_view text);
const std::string& symbol_name(Symbol s);

// ---------------------------------------------------------------------------
// Terms

enum class TermKind : std::uint8_t { Variable, Constant, Functional };

class Term {
 public:
  Term() = default;

  static Term variable(std::string_view name);
  static Term constant(std::string_view name);
  /// Nullary functional terms are Skolem constants of existentials with an empty frontier.
  static Term functional(std::string_view function, std::vector<Term> args);
  static Term functional(Symbol function, std::vector<Term> args);

  /// Fresh variable `<stem>#<n>`; '#' cannot appear in parsed rule-file names.
  static Term fresh_variable(std::string_view stem, unsigned& counter);

  TermKind kind() const;
  bool is_variable() const { return kind() == TermKind::Variable; }
  bool is_constant() const { return kind() == TermKind::Constant; }
  bool is_functional() const { return kind() == TermKind::Functional; }
  bool is_ground() const;
  bool valid() const { return id_ != kInvalid; }

  Symbol symbol() const;
  const std::string& name() const { return symbol_name(symbol()); }
  std::span<const Term> args() const;
  /// 0 for variables and constants, 1 + max depth of the arguments otherwise.
  unsigned depth() const;

  std::uint32_t id() const { return id_; }
  std::string to_string() const;

  friend bool operator==(Term a, Term b) { return a.id_ == b.id_; }

 private:
  static constexpr std::uint32_t kInvalid = std::numeric_limits<std::uint32_t>::max();
  explicit Term(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = kInvalid;
};

/// Fixed well-founded order on ground terms: depth, then constants before
/// functional terms, then symbol name, then arguments left to right.
std::strong_ordering compare_terms(Term a, Term b);

/// Strict-weak-order adaptor for std containers (canonical output order).
struct TermLess {
  bool operator()(Term a, Term b) const { return compare_terms(a, b) < 0; }
};

void collect_variables(Term t, std::vector<Term>& out);
bool occurs_in(Term needle, Term haystack);

// ---------------------------------------------------------------------------
// Predicates

enum class PredKind : std::uint8_t { Ordinary, Equality, Magic, Fun };

/// Adornment of a predicate: a string over {b, f}. For equality only "bb" and
/// the merged one-bound form "~b" (bf/fb) exist.
class Adornment {
 public:
  Adornment() = default;
  explicit Adornment(std::string pattern) : pattern_(std::move(pattern)) {}

  static Adornment all_free(std::size_t n) { return Adornment(std::string(n, 'f')); }
  static Adornment one_bound_eq() { return Adornment("~b"); }

  const std::string& str() const { return pattern_; }
  std::size_t size() const { return pattern_.size(); }
  bool bound(std::size_t i) const { return pattern_[i] == 'b'; }
  std::size_t bound_count() const;
  bool is_one_bound_eq() const { return pattern_ == "~b"; }

  friend bool operator==(const Adornment&, const Adornment&) = default;

 private:
  std::string pattern_;
};

class Pred {
 public:
  Pred() = default;

  static Pred ordinary(std::string_view name, std::size_t arity);
  static Pred equality();
  static Pred magic(Pred base, const Adornment& adornment);
  /// Fun_f for an (arity-1)-ary function symbol, or Fun_c (arity 1) for a constant.
  static Pred fun(Symbol symbol, std::size_t arity);

  PredKind kind() const;
  bool is_equality() const { return kind() == PredKind::Equality; }
  bool is_magic() const { return kind() == PredKind::Magic; }
  bool is_fun() const { return kind() == PredKind::Fun; }
  std::size_t arity() const;
  /// Ordinary name, function symbol of Fun, or "=".
  Symbol symbol() const;
  Pred base() const;
  const Adornment& adornment() const;

  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != kInvalid; }
  /// Textual encoding: `R`, `=`, `m_R#bf`, `m_=#~b`, `fun#g`.
  std::string to_string() const;

  friend bool operator==(Pred a, Pred b) { return a.id_ == b.id_; }

 private:
  static constexpr std::uint32_t kInvalid = std::numeric_limits<std::uint32_t>::max();
  explicit Pred(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = kInvalid;
};

}  // namespace chasegoal

template <>
struct std::hash<chasegoal::Term> {
  std::size_t operator()(chasegoal::Term t) const noexcept { return t.id(); }
};

template <>
struct std::hash<chasegoal::Pred> {
  std::size_t operator()(chasegoal::Pred p) const noexcept { return p.id(); }
};

namespace chasegoal {

// ---------------------------------------------------------------------------
// Atoms and rules

struct Atom {
  Pred pred;
  std::vector<Term> args;

  Atom() = default;
  Atom(Pred p, std::vector<Term> a) : pred(p), args(std::move(a)) {}
  static Atom equal(Term lhs, Term rhs) { return Atom(Pred::equality(), {lhs, rhs}); }

  bool is_equality() const { return pred.is_equality(); }
  bool is_ground() const;
  std::string to_string() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

void collect_variables(const Atom& a, std::vector<Term>& out);

/// Logic-programming rule `head <- body`; function symbols allowed anywhere.
struct Rule {
  Atom head;
  std::vector<Atom> body;

  std::vector<Term> variables() const;
  std::string to_string() const;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Generates `<stem>#<n>` variables that do not clash with a rule's variables.
class FreshVariables {
 public:
  FreshVariables() = default;
  explicit FreshVariables(const Rule& r);
  void reserve(Term var) { used_.push_back(var); }
  Term next(std::string_view stem);

 private:
  std::vector<Term> used_;
  unsigned counter_ = 0;
};

struct Program {
  std::vector<Rule> rules;
  Pred query;

  std::size_t size() const { return rules.size(); }
};

/// Every non-equality predicate occurring in the program (first-occurrence order).
std::vector<Pred> predicates_of(const std::vector<Rule>& rules);
/// Predicates occurring in some rule head.
std::vector<Pred> head_predicates(const std::vector<Rule>& rules);

struct Tgd {
  std::vector<Atom> body;
  std::vector<Atom> head;
  std::vector<Term> existentials;

  friend bool operator==(const Tgd&, const Tgd&) = default;
};

struct Egd {
  std::vector<Atom> body;
  Term lhs;
  Term rhs;

  friend bool operator==(const Egd&, const Egd&) = default;
};

using ExistentialRule = std::variant<Tgd, Egd>;

const std::vector<Atom>& body_of(const ExistentialRule& r);
std::vector<Atom>& body_of(ExistentialRule& r);
std::string to_string(const ExistentialRule& r);

// ---------------------------------------------------------------------------
// Substitutions and term maps

/// Finite map from variables to terms. Bodies are small, so a flat vector
/// with linear lookup beats hashing here.
class Substitution {
 public:
  Substitution() = default;

  std::optional<Term> get(Term var) const;
  /// Binds var; rejects non-variables in the domain.
  void set(Term var, Term value);
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::vector<std::pair<Term, Term>>& bindings() const { return bindings_; }
  void truncate(std::size_t n) { bindings_.resize(n); }
  /// Same bindings regardless of insertion order.
  bool same_as(const Substitution& other) const;

 private:
  std::vector<std::pair<Term, Term>> bindings_;
};

Term substitute(const Substitution& s, Term t);
Atom substitute(const Substitution& s, const Atom& a);
Rule substitute(const Substitution& s, const Rule& r);

/// One-way matching of a pattern against a ground term, extending s.
/// On failure s may hold partial bindings; callers truncate.
bool match(Term pattern, Term ground, Substitution& s);
bool match(const Atom& pattern, const Atom& ground, Substitution& s);

/// Mapping of ground terms to ground terms (the representative map of the chase).
class TermMap {
 public:
  std::optional<Term> get(Term t) const;
  void set(Term from, Term to) { map_[from] = to; }
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }
  std::vector<std::pair<Term, Term>> entries() const;
  bool idempotent() const;

 private:
  std::unordered_map<Term, Term> map_;
};

/// Replaces each argument (never a nested subterm) that the map defines.
Term map_shallow(const TermMap& mu, Term t);
std::vector<Term> map_shallow(const TermMap& mu, std::span<const Term> ts);
Atom map_shallow(const TermMap& mu, const Atom& a);

// ---------------------------------------------------------------------------
// Instances

using FactId = std::uint32_t;

/// Half-open stamp window used by semi-naive evaluation.
struct StampRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = std::numeric_limits<std::uint32_t>::max();
  bool contains(std::uint32_t s) const { return s >= lo && s < hi; }
};

/// Set of ground facts with a per-predicate index, a (predicate, position,
/// term) index for joins and a term-occurrence index for rewriting. Each fact
/// carries the stamp of the round in which it was inserted. Erased facts
/// stay in the index vectors and are skipped on read.
class Instance {
 public:
  /// Returns true when the fact was not present.
  bool insert(const Atom& fact, std::uint32_t stamp = 0);
  bool erase(const Atom& fact);
  bool contains(const Atom& fact) const;
  std::optional<FactId> find(const Atom& fact) const;

  std::size_t size() const { return live_; }
  bool empty() const { return live_ == 0; }

  const Atom& fact(FactId id) const { return facts_[id].atom; }
  std::uint32_t stamp(FactId id) const { return facts_[id].stamp; }
  bool alive(FactId id) const { return facts_[id].alive; }
  std::size_t capacity() const { return facts_.size(); }

  std::span<const FactId> with_predicate(Pred p) const;
  std::span<const FactId> with_argument(Pred p, std::size_t pos, Term t) const;
  /// Facts whose argument list contains t at top level.
  std::span<const FactId> with_term(Term t) const;
  /// The part of an index list whose stamps lie in w. Exact when stamps were
  /// inserted in non-decreasing order; otherwise ids is returned unchanged.
  std::span<const FactId> within(std::span<const FactId> ids, StampRange w) const;

  /// Live facts in insertion order.
  std::vector<Atom> facts() const;
  /// Live facts in canonical (printed) order.
  std::vector<Atom> sorted_facts() const;
  std::vector<Pred> predicates() const;

  template <class F>
  void for_each(F&& f) const {
    for (const auto& e : facts_)
      if (e.alive) f(e.atom);
  }

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  struct Entry {
    Atom atom;
    std::uint32_t stamp;
    bool alive;
  };
  struct AtomHash {
    std::size_t operator()(const Atom& a) const;
  };
  static std::uint64_t position_key(Pred p, std::size_t pos, Term t);

  std::vector<Entry> facts_;
  std::unordered_map<Atom, FactId, AtomHash> ids_;
  std::unordered_map<std::uint32_t, std::vector<FactId>> by_pred_;
  std::unordered_map<std::uint64_t, std::vector<FactId>> by_position_;
  std::unordered_map<std::uint32_t, std::vector<FactId>> by_term_;
  std::size_t live_ = 0;
  bool monotone_stamps_ = true;
};

/// Enumerates every substitution s over the body's variables (extending
/// `seed`) with s(body) contained in the instance; each result once. The
/// optional `windows` restrict atom i to facts whose stamp lies in windows[i].
/// The callback returns false to stop early.
void enumerate_matches(std::span<const Atom> body, const Instance& instance,
                       const std::function<bool(const Substitution&)>& callback,
                       const Substitution& seed = {},
                       std::span<const StampRange> windows = {});

/// Convenience wrapper collecting all matches.
std::vector<Substitution> all_matches(std::span<const Atom> body, const Instance& instance,
                                      const Substitution& seed = {});

// ---------------------------------------------------------------------------
// Comparison up to variable renaming

/// Canonical text of a rule with variables renamed by first occurrence
/// (head first). With symmetric_equality, the two sides of each equality atom
/// are put in a fixed order before naming, so x = y and y = x coincide when
/// that does not depend on the naming itself.
std::string canonical_form(const Rule& r);
bool equivalent_up_to_renaming(const Rule& a, const Rule& b, bool symmetric_equality = false);
/// Multiset equality of rules up to per-rule variable renaming.
bool same_rules_up_to_renaming(const std::vector<Rule>& a, const std::vector<Rule>& b,
                               bool symmetric_equality = false);

}  // namespace chasegoal
