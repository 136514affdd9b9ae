#include "chasegoal/kernel.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>

#include "chasegoal/errors.hpp"

namespace chasegoal {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct SymbolTable {
  std::deque<std::string> names;
  std::unordered_map<std::string_view, Symbol> ids;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

struct TermNode {
  TermKind kind;
  Symbol symbol;
  unsigned depth;
  bool ground;
  std::vector<Term> args;
};

struct TermKey {
  TermKind kind;
  Symbol symbol;
  std::vector<std::uint32_t> args;
  bool operator==(const TermKey&) const = default;
};

struct TermKeyHash {
  std::size_t operator()(const TermKey& k) const {
    std::size_t h = hash_combine(static_cast<std::size_t>(k.kind), k.symbol);
    for (auto a : k.args) h = hash_combine(h, a);
    return h;
  }
};

struct TermTable {
  std::deque<TermNode> nodes;
  std::unordered_map<TermKey, std::uint32_t, TermKeyHash> ids;
};

TermTable& terms() {
  static TermTable table;
  return table;
}

struct PredNode {
  PredKind kind;
  Symbol symbol;
  std::size_t arity;
  Pred base;
  Adornment adornment;
};

struct PredKey {
  PredKind kind;
  Symbol symbol;
  std::size_t arity;
  std::uint32_t base;
  std::string adornment;
  bool operator==(const PredKey&) const = default;
};

struct PredKeyHash {
  std::size_t operator()(const PredKey& k) const {
    std::size_t h = hash_combine(static_cast<std::size_t>(k.kind), k.symbol);
    h = hash_combine(h, k.arity);
    h = hash_combine(h, k.base);
    return hash_combine(h, std::hash<std::string>{}(k.adornment));
  }
};

struct PredTable {
  std::deque<PredNode> nodes;
  std::unordered_map<PredKey, std::uint32_t, PredKeyHash> ids;
};

PredTable& preds() {
  static PredTable table;
  return table;
}

}  // namespace

Symbol intern(std::string_view text) {
  auto& t = symbols();
  if (auto it = t.ids.find(text); it != t.ids.end()) return it->second;
  t.names.emplace_back(text);
  auto id = static_cast<Symbol>(t.names.size() - 1);
  t.ids.emplace(std::string_view(t.names.back()), id);
  return id;
}

const std::string& symbol_name(Symbol s) { return symbols().names.at(s); }

// ---------------------------------------------------------------------------
// Term

Term Term::variable(std::string_view name) {
  auto& t = terms();
  TermKey key{TermKind::Variable, intern(name), {}};
  if (auto it = t.ids.find(key); it != t.ids.end()) return Term(it->second);
  t.nodes.push_back(TermNode{TermKind::Variable, key.symbol, 0, false, {}});
  auto id = static_cast<std::uint32_t>(t.nodes.size() - 1);
  t.ids.emplace(std::move(key), id);
  return Term(id);
}

Term Term::constant(std::string_view name) {
  auto& t = terms();
  TermKey key{TermKind::Constant, intern(name), {}};
  if (auto it = t.ids.find(key); it != t.ids.end()) return Term(it->second);
  t.nodes.push_back(TermNode{TermKind::Constant, key.symbol, 0, true, {}});
  auto id = static_cast<std::uint32_t>(t.nodes.size() - 1);
  t.ids.emplace(std::move(key), id);
  return Term(id);
}

Term Term::functional(std::string_view function, std::vector<Term> args) {
  return functional(intern(function), std::move(args));
}

Term Term::functional(Symbol function, std::vector<Term> args) {
  auto& t = terms();
  TermKey key{TermKind::Functional, function, {}};
  key.args.reserve(args.size());
  unsigned depth = 0;
  bool ground = true;
  for (Term a : args) {
    key.args.push_back(a.id());
    depth = std::max(depth, a.depth());
    ground = ground && a.is_ground();
  }
  if (auto it = t.ids.find(key); it != t.ids.end()) return Term(it->second);
  t.nodes.push_back(TermNode{TermKind::Functional, function, depth + 1, ground, std::move(args)});
  auto id = static_cast<std::uint32_t>(t.nodes.size() - 1);
  t.ids.emplace(std::move(key), id);
  return Term(id);
}

Term Term::fresh_variable(std::string_view stem, unsigned& counter) {
  std::string base(stem.substr(0, stem.find('#')));
  return variable(base + "#" + std::to_string(++counter));
}

TermKind Term::kind() const { return terms().nodes[id_].kind; }
bool Term::is_ground() const { return terms().nodes[id_].ground; }
Symbol Term::symbol() const { return terms().nodes[id_].symbol; }
std::span<const Term> Term::args() const { return terms().nodes[id_].args; }
unsigned Term::depth() const { return terms().nodes[id_].depth; }

namespace {

bool bare_constant(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

}  // namespace

std::string Term::to_string() const {
  const auto& n = terms().nodes[id_];
  switch (n.kind) {
    case TermKind::Variable:
      return "?" + symbol_name(n.symbol);
    case TermKind::Constant: {
      const auto& s = symbol_name(n.symbol);
      if (bare_constant(s)) return s;
      std::string q = "'";
      for (char c : s) {
        if (c == '\'') q += '\'';
        q += c;
      }
      return q + "'";
    }
    case TermKind::Functional: {
      std::string out = symbol_name(n.symbol) + "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ",";
        out += n.args[i].to_string();
      }
      return out + ")";
    }
  }
  return {};
}

std::strong_ordering compare_terms(Term a, Term b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a.depth() <=> b.depth(); c != 0) return c;
  auto rank = [](TermKind k) {
    switch (k) {
      case TermKind::Variable: return 0;
      case TermKind::Constant: return 1;
      case TermKind::Functional: return 2;
    }
    return 3;
  };
  if (auto c = rank(a.kind()) <=> rank(b.kind()); c != 0) return c;
  if (a.symbol() != b.symbol()) {
    int c = a.name().compare(b.name());
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  auto aa = a.args();
  auto ba = b.args();
  for (std::size_t i = 0; i < std::min(aa.size(), ba.size()); ++i)
    if (auto c = compare_terms(aa[i], ba[i]); c != 0) return c;
  return aa.size() <=> ba.size();
}

void collect_variables(Term t, std::vector<Term>& out) {
  if (t.is_variable()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (Term a : t.args()) collect_variables(a, out);
}

bool occurs_in(Term needle, Term haystack) {
  if (needle == haystack) return true;
  for (Term a : haystack.args())
    if (occurs_in(needle, a)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Pred

std::size_t Adornment::bound_count() const {
  return static_cast<std::size_t>(std::count(pattern_.begin(), pattern_.end(), 'b'));
}

Pred Pred::ordinary(std::string_view name, std::size_t arity) {
  auto& t = preds();
  PredKey key{PredKind::Ordinary, intern(name), arity, 0, {}};
  if (auto it = t.ids.find(key); it != t.ids.end()) return Pred(it->second);
  t.nodes.push_back(PredNode{PredKind::Ordinary, key.symbol, arity, Pred(), {}});
  auto id = static_cast<std::uint32_t>(t.nodes.size() - 1);
  t.ids.emplace(std::move(key), id);
  return Pred(id);
}

Pred Pred::equality() {
  static const Pred eq = [] {
    auto& t = preds();
    PredKey key{PredKind::Equality, intern("="), 2, 0, {}};
    t.nodes.push_back(PredNode{PredKind::Equality, key.symbol, 2, Pred(), {}});
    auto id = static_cast<std::uint32_t>(t.nodes.size() - 1);
    t.ids.emplace(std::move(key), id);
    return Pred(id);
  }();
  return eq;
}

Pred Pred::magic(Pred base, const Adornment& adornment) {
  if (base.is_magic()) throw ContractError("NestedMagic", "magic predicates are never adorned");
  if (base.is_equality()) {
    if (adornment.str() != "bb" && !adornment.is_one_bound_eq())
      throw ContractError("BadAdornment", "equality admits only bb and ~b, got " + adornment.str());
  } else if (adornment.size() != base.arity() ||
             adornment.str().find_first_not_of("bf") != std::string::npos) {
    throw ContractError("BadAdornment", "adornment " + adornment.str() + " for " + base.to_string());
  }
  auto& t = preds();
  PredKey key{PredKind::Magic, base.symbol(), adornment.bound_count(), base.id(), adornment.str()};
  if (auto it = t.ids.find(key); it != t.ids.end()) return Pred(it->second);
  t.nodes.push_back(PredNode{PredKind::Magic, key.symbol, key.arity, base, adornment});
  auto id = static_cast<std::uint32_t>(t.nodes.size() - 1);
  t.ids.emplace(std::move(key), id);
  return Pred(id);
}

Pred Pred::fun(Symbol symbol, std::size_t arity) {
  auto& t = preds();
  PredKey key{PredKind::Fun, symbol, arity, 0, {}};
  if (auto it = t.ids.find(key); it != t.ids.end()) return Pred(it->second);
  t.nodes.push_back(PredNode{PredKind::Fun, symbol, arity, Pred(), {}});
  auto id = static_cast<std::uint32_t>(t.nodes.size() - 1);
  t.ids.emplace(std::move(key), id);
  return Pred(id);
}

PredKind Pred::kind() const { return preds().nodes[id_].kind; }
std::size_t Pred::arity() const { return preds().nodes[id_].arity; }
Symbol Pred::symbol() const { return preds().nodes[id_].symbol; }
Pred Pred::base() const { return preds().nodes[id_].base; }
const Adornment& Pred::adornment() const { return preds().nodes[id_].adornment; }

std::string Pred::to_string() const {
  const auto& n = preds().nodes[id_];
  switch (n.kind) {
    case PredKind::Ordinary: return symbol_name(n.symbol);
    case PredKind::Equality: return "=";
    case PredKind::Magic: return "m_" + n.base.to_string() + "#" + n.adornment.str();
    case PredKind::Fun: {
      const auto& s = symbol_name(n.symbol);
      if (bare_constant(s)) return "fun#" + s;
      std::string q = "fun#'";
      for (char c : s) {
        if (c == '\'') q += '\'';
        q += c;
      }
      return q + "'";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Atoms and rules

bool Atom::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](Term t) { return t.is_ground(); });
}

FreshVariables::FreshVariables(const Rule& r) : used_(r.variables()) {}

Term FreshVariables::next(std::string_view stem) {
  while (true) {
    Term v = Term::fresh_variable(stem, counter_);
    if (std::find(used_.begin(), used_.end(), v) == used_.end()) {
      used_.push_back(v);
      return v;
    }
  }
}

std::string Atom::to_string() const {
  if (is_equality()) return args[0].to_string() + " = " + args[1].to_string();
  std::string out = pred.to_string();
  if (args.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].to_string();
  }
  return out + ")";
}

void collect_variables(const Atom& a, std::vector<Term>& out) {
  for (Term t : a.args) collect_variables(t, out);
}

std::vector<Term> Rule::variables() const {
  std::vector<Term> out;
  collect_variables(head, out);
  for (const auto& b : body) collect_variables(b, out);
  return out;
}

std::string Rule::to_string() const {
  std::string out = head.to_string();
  if (body.empty()) return out + ".";
  out += " :- ";
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    out += body[i].to_string();
  }
  return out + ".";
}

std::vector<Pred> predicates_of(const std::vector<Rule>& rules) {
  std::vector<Pred> out;
  auto add = [&](Pred p) {
    if (!p.is_equality() && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  for (const auto& r : rules) {
    add(r.head.pred);
    for (const auto& b : r.body) add(b.pred);
  }
  return out;
}

std::vector<Pred> head_predicates(const std::vector<Rule>& rules) {
  std::vector<Pred> out;
  for (const auto& r : rules)
    if (std::find(out.begin(), out.end(), r.head.pred) == out.end()) out.push_back(r.head.pred);
  return out;
}

const std::vector<Atom>& body_of(const ExistentialRule& r) {
  return std::visit([](const auto& x) -> const std::vector<Atom>& { return x.body; }, r);
}

std::vector<Atom>& body_of(ExistentialRule& r) {
  return std::visit([](auto& x) -> std::vector<Atom>& { return x.body; }, r);
}

std::string to_string(const ExistentialRule& r) {
  std::string out;
  const auto& body = body_of(r);
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    out += body[i].to_string();
  }
  out += " -> ";
  if (const auto* tgd = std::get_if<Tgd>(&r)) {
    for (std::size_t i = 0; i < tgd->head.size(); ++i) {
      if (i) out += ", ";
      out += tgd->head[i].to_string();
    }
  } else {
    const auto& egd = std::get<Egd>(r);
    out += egd.lhs.to_string() + " = " + egd.rhs.to_string();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitutions

std::optional<Term> Substitution::get(Term var) const {
  for (const auto& [k, v] : bindings_)
    if (k == var) return v;
  return std::nullopt;
}

void Substitution::set(Term var, Term value) {
  if (!var.is_variable())
    throw ContractError("NotAVariable", "substitution domain must be variables, got " + var.to_string());
  for (auto& [k, v] : bindings_)
    if (k == var) {
      v = value;
      return;
    }
  bindings_.emplace_back(var, value);
}

bool Substitution::same_as(const Substitution& other) const {
  if (size() != other.size()) return false;
  for (const auto& [k, v] : bindings_)
    if (other.get(k) != v) return false;
  return true;
}

Term substitute(const Substitution& s, Term t) {
  switch (t.kind()) {
    case TermKind::Variable: {
      auto v = s.get(t);
      return v ? *v : t;
    }
    case TermKind::Constant:
      return t;
    case TermKind::Functional: {
      if (t.is_ground()) return t;
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (Term a : t.args()) args.push_back(substitute(s, a));
      return Term::functional(t.symbol(), std::move(args));
    }
  }
  return t;
}

Atom substitute(const Substitution& s, const Atom& a) {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (Term t : a.args) out.args.push_back(substitute(s, t));
  return out;
}

Rule substitute(const Substitution& s, const Rule& r) {
  Rule out{substitute(s, r.head), {}};
  out.body.reserve(r.body.size());
  for (const auto& b : r.body) out.body.push_back(substitute(s, b));
  return out;
}

bool match(Term pattern, Term ground, Substitution& s) {
  switch (pattern.kind()) {
    case TermKind::Variable: {
      if (auto v = s.get(pattern)) return *v == ground;
      s.set(pattern, ground);
      return true;
    }
    case TermKind::Constant:
      return pattern == ground;
    case TermKind::Functional: {
      if (pattern.is_ground()) return pattern == ground;
      if (!ground.is_functional() || ground.symbol() != pattern.symbol()) return false;
      auto pa = pattern.args();
      auto ga = ground.args();
      if (pa.size() != ga.size()) return false;
      for (std::size_t i = 0; i < pa.size(); ++i)
        if (!match(pa[i], ga[i], s)) return false;
      return true;
    }
  }
  return false;
}

bool match(const Atom& pattern, const Atom& ground, Substitution& s) {
  if (pattern.pred != ground.pred || pattern.args.size() != ground.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match(pattern.args[i], ground.args[i], s)) return false;
  return true;
}

std::optional<Term> TermMap::get(Term t) const {
  if (auto it = map_.find(t); it != map_.end()) return it->second;
  return std::nullopt;
}

std::vector<std::pair<Term, Term>> TermMap::entries() const {
  std::vector<std::pair<Term, Term>> out;
  out.reserve(map_.size());
  for (const auto& [k, v] : map_) out.emplace_back(k, v);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return compare_terms(a.first, b.first) < 0; });
  return out;
}

bool TermMap::idempotent() const {
  for (const auto& [k, v] : map_) {
    auto again = get(v);
    if (again && *again != v) return false;
  }
  return true;
}

Term map_shallow(const TermMap& mu, Term t) {
  auto v = mu.get(t);
  return v ? *v : t;
}

std::vector<Term> map_shallow(const TermMap& mu, std::span<const Term> ts) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (Term t : ts) out.push_back(map_shallow(mu, t));
  return out;
}

Atom map_shallow(const TermMap& mu, const Atom& a) {
  return Atom(a.pred, map_shallow(mu, std::span<const Term>(a.args)));
}

// ---------------------------------------------------------------------------
// Instance

std::size_t Instance::AtomHash::operator()(const Atom& a) const {
  std::size_t h = a.pred.id();
  for (Term t : a.args) h = hash_combine(h, t.id());
  return h;
}

std::uint64_t Instance::position_key(Pred p, std::size_t pos, Term t) {
  return (static_cast<std::uint64_t>(t.id()) << 32) | (static_cast<std::uint64_t>(p.id()) << 8) |
         static_cast<std::uint64_t>(pos & 0xff);
}

bool Instance::insert(const Atom& fact, std::uint32_t stamp) {
  auto [it, inserted] = ids_.try_emplace(fact, static_cast<FactId>(facts_.size()));
  if (!inserted) {
    auto& e = facts_[it->second];
    if (e.alive) return false;
    // Resurrect under a new id so stale index entries stay harmless.
    it->second = static_cast<FactId>(facts_.size());
  }
  FactId id = it->second;
  if (!facts_.empty() && stamp < facts_.back().stamp) monotone_stamps_ = false;
  facts_.push_back(Entry{fact, stamp, true});
  by_pred_[fact.pred.id()].push_back(id);
  for (std::size_t i = 0; i < fact.args.size(); ++i) {
    by_position_[position_key(fact.pred, i, fact.args[i])].push_back(id);
    auto& terms_list = by_term_[fact.args[i].id()];
    if (terms_list.empty() || terms_list.back() != id) terms_list.push_back(id);
  }
  ++live_;
  return true;
}

std::span<const FactId> Instance::within(std::span<const FactId> ids, StampRange w) const {
  if (!monotone_stamps_) return ids;
  auto stamp_of = [&](FactId id) { return facts_[id].stamp; };
  auto lo = std::partition_point(ids.begin(), ids.end(), [&](FactId id) { return stamp_of(id) < w.lo; });
  auto hi = std::partition_point(lo, ids.end(), [&](FactId id) { return stamp_of(id) < w.hi; });
  return {lo, hi};
}

bool Instance::erase(const Atom& fact) {
  auto it = ids_.find(fact);
  if (it == ids_.end() || !facts_[it->second].alive) return false;
  facts_[it->second].alive = false;
  --live_;
  return true;
}

bool Instance::contains(const Atom& fact) const { return find(fact).has_value(); }

std::optional<FactId> Instance::find(const Atom& fact) const {
  auto it = ids_.find(fact);
  if (it == ids_.end() || !facts_[it->second].alive) return std::nullopt;
  return it->second;
}

std::span<const FactId> Instance::with_predicate(Pred p) const {
  if (auto it = by_pred_.find(p.id()); it != by_pred_.end()) return it->second;
  return {};
}

std::span<const FactId> Instance::with_argument(Pred p, std::size_t pos, Term t) const {
  if (auto it = by_position_.find(position_key(p, pos, t)); it != by_position_.end()) return it->second;
  return {};
}

std::span<const FactId> Instance::with_term(Term t) const {
  if (auto it = by_term_.find(t.id()); it != by_term_.end()) return it->second;
  return {};
}

std::vector<Atom> Instance::facts() const {
  std::vector<Atom> out;
  out.reserve(live_);
  for_each([&](const Atom& a) { out.push_back(a); });
  return out;
}

std::vector<Atom> Instance::sorted_facts() const {
  auto out = facts();
  std::vector<std::pair<std::string, Atom>> keyed;
  keyed.reserve(out.size());
  for (auto& a : out) keyed.emplace_back(a.to_string(), std::move(a));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  out.clear();
  for (auto& [k, a] : keyed) out.push_back(std::move(a));
  return out;
}

std::vector<Pred> Instance::predicates() const {
  std::vector<Pred> out;
  for (const auto& e : facts_)
    if (e.alive && std::find(out.begin(), out.end(), e.atom.pred) == out.end()) out.push_back(e.atom.pred);
  return out;
}

bool operator==(const Instance& a, const Instance& b) {
  if (a.size() != b.size()) return false;
  bool same = true;
  a.for_each([&](const Atom& f) {
    if (same && !b.contains(f)) same = false;
  });
  return same;
}

// ---------------------------------------------------------------------------
// Matching

namespace {

struct Matcher {
  std::span<const Atom> body;
  const Instance& instance;
  const std::function<bool(const Substitution&)>& callback;
  std::span<const StampRange> windows;
  std::vector<bool> done;
  Substitution sub;
  bool stopped = false;

  StampRange window(std::size_t i) const { return windows.empty() ? StampRange{} : windows[i]; }

  // Candidate facts for atom i under the current bindings: the shortest index
  // list over its argument positions that are already ground.
  std::span<const FactId> candidates(std::size_t i) const {
    const Atom& a = body[i];
    std::span<const FactId> best = instance.with_predicate(a.pred);
    for (std::size_t p = 0; p < a.args.size() && !best.empty(); ++p) {
      Term t = a.args[p];
      if (!t.is_ground()) {
        if (!t.is_variable()) continue;
        auto v = sub.get(t);
        if (!v) continue;
        t = *v;
      }
      auto c = instance.with_argument(a.pred, p, t);
      if (c.size() < best.size()) best = c;
    }
    return instance.within(best, window(i));
  }

  void run(std::size_t remaining) {
    if (stopped) return;
    if (remaining == 0) {
      if (!callback(sub)) stopped = true;
      return;
    }
    std::size_t pick = body.size();
    std::span<const FactId> pick_candidates;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (done[i]) continue;
      auto c = candidates(i);
      if (pick == body.size() || c.size() < pick_candidates.size()) {
        pick = i;
        pick_candidates = c;
        if (c.empty()) break;
      }
    }
    if (pick_candidates.empty()) return;
    done[pick] = true;
    const Atom& pattern = body[pick];
    StampRange w = window(pick);
    std::size_t mark = sub.size();
    // Copy: the index vector may not be modified during matching, but the
    // span stays valid only while no insertions happen, which holds here.
    for (FactId id : pick_candidates) {
      if (!instance.alive(id) || !w.contains(instance.stamp(id))) continue;
      if (match(pattern, instance.fact(id), sub)) run(remaining - 1);
      sub.truncate(mark);
      if (stopped) break;
    }
    done[pick] = false;
  }
};

}  // namespace

void enumerate_matches(std::span<const Atom> body, const Instance& instance,
                       const std::function<bool(const Substitution&)>& callback,
                       const Substitution& seed, std::span<const StampRange> windows) {
  Matcher m{body, instance, callback, windows, std::vector<bool>(body.size(), false), seed};
  m.run(body.size());
}

std::vector<Substitution> all_matches(std::span<const Atom> body, const Instance& instance,
                                      const Substitution& seed) {
  std::vector<Substitution> out;
  enumerate_matches(
      body, instance,
      [&](const Substitution& s) {
        out.push_back(s);
        return true;
      },
      seed);
  return out;
}

// ---------------------------------------------------------------------------
// Renaming-insensitive comparison

namespace {

std::string canonical_text(const Rule& r) {
  std::vector<Term> vars = r.variables();
  Substitution rename;
  for (std::size_t i = 0; i < vars.size(); ++i) rename.set(vars[i], Term::variable("v" + std::to_string(i)));
  return substitute(rename, r).to_string();
}

// All orientations of the body equality atoms, as canonical texts.
std::vector<std::string> oriented_forms(const Rule& r) {
  std::vector<std::size_t> eq;
  for (std::size_t i = 0; i < r.body.size(); ++i)
    if (r.body[i].is_equality()) eq.push_back(i);
  if (r.head.is_equality()) eq.push_back(r.body.size());
  std::vector<std::string> out;
  const std::size_t combos = std::size_t{1} << std::min<std::size_t>(eq.size(), 12);
  for (std::size_t mask = 0; mask < combos; ++mask) {
    Rule copy = r;
    for (std::size_t k = 0; k < eq.size() && k < 12; ++k) {
      if (!(mask & (std::size_t{1} << k))) continue;
      Atom& a = eq[k] == r.body.size() ? copy.head : copy.body[eq[k]];
      std::swap(a.args[0], a.args[1]);
    }
    out.push_back(canonical_text(copy));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string canonical_form(const Rule& r) { return canonical_text(r); }

bool equivalent_up_to_renaming(const Rule& a, const Rule& b, bool symmetric_equality) {
  if (!symmetric_equality) return canonical_text(a) == canonical_text(b);
  auto fa = oriented_forms(a);
  auto cb = canonical_text(b);
  return std::binary_search(fa.begin(), fa.end(), cb);
}

bool same_rules_up_to_renaming(const std::vector<Rule>& a, const std::vector<Rule>& b,
                               bool symmetric_equality) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& ra : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (used[j] || !equivalent_up_to_renaming(ra, b[j], symmetric_equality)) continue;
      used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace chasegoal
