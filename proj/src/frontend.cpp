#include "chasegoal/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "chasegoal/errors.hpp"

namespace chasegoal {

namespace {

enum class Tok { Ident, Var, Quoted, LParen, RParen, Comma, Arrow, Neck, Equals, Dot, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

bool ident_char(char c, bool extended) {
  auto u = static_cast<unsigned char>(c);
  if (std::isalnum(u) || c == '_') return true;
  return extended && (c == '#' || c == '~');
}

// Tokenizes one logical rule. `extended` admits the tagged predicate names and
// '#'-suffixed variables produced by the transformations.
class Lexer {
 public:
  Lexer(std::string_view text, std::size_t line, bool extended)
      : text_(text), line_(line), extended_(extended) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      std::size_t start = pos_;
      char c = text_[pos_];
      if (c == '(') {
        out.push_back({Tok::LParen, "(", start});
        ++pos_;
      } else if (c == ')') {
        out.push_back({Tok::RParen, ")", start});
        ++pos_;
      } else if (c == ',') {
        out.push_back({Tok::Comma, ",", start});
        ++pos_;
      } else if (c == '.') {
        out.push_back({Tok::Dot, ".", start});
        ++pos_;
      } else if (c == '-' && peek(1) == '>') {
        out.push_back({Tok::Arrow, "->", start});
        pos_ += 2;
      } else if (c == ':' && peek(1) == '-') {
        out.push_back({Tok::Neck, ":-", start});
        pos_ += 2;
      } else if (c == '=') {
        out.push_back({Tok::Equals, "=", start});
        ++pos_;
      } else if (c == '?') {
        ++pos_;
        std::size_t s = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_], extended_)) ++pos_;
        if (pos_ == s) fail(start, "empty variable name");
        out.push_back({Tok::Var, std::string(text_.substr(s, pos_ - s)), start});
      } else if (c == '\'') {
        out.push_back({Tok::Quoted, quoted(start), start});
      } else if (extended_ && text_.substr(pos_).starts_with("m_=#")) {
        pos_ += 4;
        while (pos_ < text_.size() && ident_char(text_[pos_], true)) ++pos_;
        out.push_back({Tok::Ident, std::string(text_.substr(start, pos_ - start)), start});
      } else if (extended_ && text_.substr(pos_).starts_with("fun#'")) {
        pos_ += 4;
        std::string sym = quoted(pos_);
        out.push_back({Tok::Ident, "fun#" + sym, start});
      } else if (ident_char(c, extended_)) {
        while (pos_ < text_.size() && ident_char(text_[pos_], extended_)) ++pos_;
        out.push_back({Tok::Ident, std::string(text_.substr(start, pos_ - start)), start});
      } else {
        fail(start, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({Tok::End, "", text_.size()});
    return out;
  }

  [[noreturn]] void fail(std::size_t column, const std::string& reason) const {
    throw InputError("MalformedRule",
                     "line " + std::to_string(line_) + ", column " + std::to_string(column + 1) + ": " + reason);
  }

 private:
  char peek(std::size_t k) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string quoted(std::size_t start) {
    ++pos_;
    std::string value;
    while (true) {
      if (pos_ >= text_.size()) fail(start, "unterminated quoted constant");
      char c = text_[pos_++];
      if (c == '\'') {
        if (pos_ < text_.size() && text_[pos_] == '\'') {
          value += '\'';
          ++pos_;
          continue;
        }
        return value;
      }
      value += c;
    }
  }

  std::string_view text_;
  std::size_t line_;
  bool extended_;
  std::size_t pos_ = 0;
};

// Strips a `#` comment that is not inside a quoted constant (rule files only).
std::string_view strip_comment(std::string_view line) {
  bool in_quote = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\'') in_quote = !in_quote;
    if (line[i] == '#' && !in_quote) return line.substr(0, i);
  }
  return line;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// Raw atom before predicate resolution: either `name(args)` or `lhs = rhs`.
struct RawAtom {
  bool equality = false;
  std::string name;
  std::vector<Term> args;
  std::size_t column = 0;
};

class Parser {
 public:
  Parser(Lexer& lexer, std::vector<Token> tokens, bool allow_functions)
      : lexer_(lexer), tokens_(std::move(tokens)), allow_functions_(allow_functions) {}

  const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  void expect(Tok k, const char* what) {
    if (!at(k)) lexer_.fail(peek().column, std::string("expected ") + what);
    take();
  }

  Term term() {
    Token t = take();
    switch (t.kind) {
      case Tok::Var:
        return Term::variable(t.text);
      case Tok::Quoted:
        return Term::constant(t.text);
      case Tok::Ident: {
        if (!at(Tok::LParen)) return Term::constant(t.text);
        if (!allow_functions_) lexer_.fail(t.column, "function terms are not allowed in existential rules");
        take();
        std::vector<Term> args;
        if (!at(Tok::RParen)) {
          args.push_back(term());
          while (at(Tok::Comma)) {
            take();
            args.push_back(term());
          }
        }
        expect(Tok::RParen, "')'");
        return Term::functional(t.text, std::move(args));
      }
      default:
        lexer_.fail(t.column, "expected a term");
    }
  }

  RawAtom atom() {
    RawAtom out;
    out.column = peek().column;
    bool starts_term = at(Tok::Var) || at(Tok::Quoted) ||
                       (at(Tok::Ident) && peek(1).kind == Tok::Equals);
    if (starts_term) {
      out.equality = true;
      out.args.push_back(term());
      expect(Tok::Equals, "'='");
      out.args.push_back(term());
      return out;
    }
    if (!at(Tok::Ident)) lexer_.fail(peek().column, "expected an atom");
    std::size_t save = pos_;
    out.name = take().text;
    if (at(Tok::LParen)) {
      take();
      if (!at(Tok::RParen)) {
        out.args.push_back(term());
        while (at(Tok::Comma)) {
          take();
          out.args.push_back(term());
        }
      }
      expect(Tok::RParen, "')'");
    }
    if (at(Tok::Equals)) {
      // `f(?x) = ?y`: the "atom" was a function term.
      pos_ = save;
      out = RawAtom{};
      out.equality = true;
      out.column = peek().column;
      out.args.push_back(term());
      expect(Tok::Equals, "'='");
      out.args.push_back(term());
    }
    return out;
  }

  std::vector<RawAtom> conjunction(Tok stop1, Tok stop2) {
    std::vector<RawAtom> out;
    if (at(stop1) || at(stop2)) return out;
    out.push_back(atom());
    while (at(Tok::Comma)) {
      take();
      out.push_back(atom());
    }
    return out;
  }

  Lexer& lexer() { return lexer_; }

 private:
  Lexer& lexer_;
  std::vector<Token> tokens_;
  bool allow_functions_;
  std::size_t pos_ = 0;
};

// Resolves predicate names for logic programs, including tagged names.
Pred resolve_program_pred(const RawAtom& a, Lexer& lexer) {
  if (a.equality) return Pred::equality();
  const std::string& n = a.name;
  if (n.starts_with("fun#")) return Pred::fun(intern(n.substr(4)), a.args.size());
  if (n.starts_with("m_")) {
    auto hash = n.rfind('#');
    if (hash != std::string::npos) {
      std::string base = n.substr(2, hash - 2);
      Adornment ad(n.substr(hash + 1));
      if (base == "=") return Pred::magic(Pred::equality(), ad);
      if (base.find('#') != std::string::npos) lexer.fail(a.column, "nested predicate tag in " + n);
      if (ad.bound_count() != a.args.size())
        lexer.fail(a.column, "magic predicate " + n + " expects " + std::to_string(ad.bound_count()) + " arguments");
      return Pred::magic(Pred::ordinary(base, ad.size()), ad);
    }
  }
  if (n.find('#') != std::string::npos || n.find('~') != std::string::npos)
    lexer.fail(a.column, "unknown predicate tag in " + n);
  return Pred::ordinary(n, a.args.size());
}

void check_arities(std::map<std::string, std::size_t>& seen, const Atom& a, Lexer& lexer, std::size_t column) {
  if (a.pred.kind() != PredKind::Ordinary) return;
  auto [it, inserted] = seen.emplace(a.pred.to_string(), a.args.size());
  if (!inserted && it->second != a.args.size())
    lexer.fail(column, "predicate " + a.pred.to_string() + " used with arities " + std::to_string(it->second) +
                           " and " + std::to_string(a.args.size()));
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<ExistentialRule> parse_rules(std::string_view text) {
  std::vector<ExistentialRule> out;
  std::map<std::string, std::size_t> arities;
  auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = strip_comment(lines[ln]);
    if (blank(line)) continue;
    Lexer lexer(line, ln + 1, false);
    Parser p(lexer, lexer.run(), false);
    auto to_atoms = [&](const std::vector<RawAtom>& raw, bool body) {
      std::vector<Atom> atoms;
      for (const auto& r : raw) {
        if (r.equality) {
          if (body) lexer.fail(r.column, "equality atoms are not allowed in rule bodies");
          lexer.fail(r.column, "an equality head must be the only head atom");
        }
        Atom a(Pred::ordinary(r.name, r.args.size()), r.args);
        check_arities(arities, a, lexer, r.column);
        atoms.push_back(std::move(a));
      }
      return atoms;
    };
    auto body_raw = p.conjunction(Tok::Arrow, Tok::End);
    p.expect(Tok::Arrow, "'->'");
    auto head_raw = p.conjunction(Tok::Dot, Tok::End);
    if (p.at(Tok::Dot)) p.take();
    if (!p.at(Tok::End)) lexer.fail(p.peek().column, "unexpected trailing input");
    if (head_raw.empty()) lexer.fail(line.size(), "empty rule head");

    std::vector<Atom> body = to_atoms(body_raw, true);
    std::vector<Term> body_vars;
    for (const auto& b : body) collect_variables(b, body_vars);

    if (head_raw.size() == 1 && head_raw[0].equality) {
      Egd egd{std::move(body), head_raw[0].args[0], head_raw[0].args[1]};
      for (Term t : {egd.lhs, egd.rhs})
        if (t.is_variable() && std::find(body_vars.begin(), body_vars.end(), t) == body_vars.end())
          throw InputError("UnboundFrontierVariable", "line " + std::to_string(ln + 1) + ": variable " +
                                                          t.to_string() + " of an EGD head must occur in the body");
      out.emplace_back(std::move(egd));
      continue;
    }
    Tgd tgd{std::move(body), to_atoms(head_raw, false), {}};
    std::vector<Term> head_vars;
    for (const auto& h : tgd.head) collect_variables(h, head_vars);
    for (Term v : head_vars)
      if (std::find(body_vars.begin(), body_vars.end(), v) == body_vars.end()) tgd.existentials.push_back(v);
    out.emplace_back(std::move(tgd));
  }
  return out;
}

std::vector<Rule> parse_program(std::string_view text) {
  std::vector<Rule> out;
  std::map<std::string, std::size_t> arities;
  auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = lines[ln];
    if (blank(line) || line[line.find_first_not_of(" \t")] == '%') continue;
    Lexer lexer(line, ln + 1, true);
    Parser p(lexer, lexer.run(), true);
    auto resolve = [&](const RawAtom& r) {
      Atom a(resolve_program_pred(r, lexer), r.args);
      check_arities(arities, a, lexer, r.column);
      return a;
    };
    Rule rule;
    rule.head = resolve(p.atom());
    if (p.at(Tok::Neck)) {
      p.take();
      for (const auto& r : p.conjunction(Tok::Dot, Tok::End)) rule.body.push_back(resolve(r));
    }
    p.expect(Tok::Dot, "'.'");
    if (!p.at(Tok::End)) lexer.fail(p.peek().column, "unexpected trailing input");
    out.push_back(std::move(rule));
  }
  return out;
}

void Schema::set(const std::string& pred, std::size_t arity, std::vector<std::string> sorts) {
  sorts_[{pred, arity}] = std::move(sorts);
}

std::optional<std::string> Schema::sort_of(Pred p, std::size_t pos) const {
  if (p.kind() != PredKind::Ordinary) return std::nullopt;
  auto it = sorts_.find({p.to_string(), p.arity()});
  if (it == sorts_.end() || pos >= it->second.size() || it->second[pos].empty()) return std::nullopt;
  return it->second[pos];
}

bool Schema::has(Pred p) const {
  return p.kind() == PredKind::Ordinary && sorts_.count({p.to_string(), p.arity()}) > 0;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Schema parse_schema(std::string_view text) {
  Schema schema;
  auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = strip_comment(lines[ln]);
    if (blank(line)) continue;
    auto fail = [&](const std::string& why) {
      throw InputError("MalformedSchema", "line " + std::to_string(ln + 1) + ": " + why);
    };
    auto colon = line.find(':');
    auto slash = line.find('/');
    if (colon == std::string_view::npos || slash == std::string_view::npos || slash > colon)
      fail("expected `pred/arity: sort,...`");
    std::string pred = trim(line.substr(0, slash));
    std::size_t arity = 0;
    try {
      arity = std::stoul(trim(line.substr(slash + 1, colon - slash - 1)));
    } catch (const std::exception&) {
      fail("bad arity");
    }
    std::vector<std::string> sorts;
    std::string rest = trim(line.substr(colon + 1));
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) sorts.push_back(trim(item));
    if (rest.empty()) sorts.clear();
    if (sorts.size() != arity) fail("predicate " + pred + " has arity " + std::to_string(arity) + " but " +
                                    std::to_string(sorts.size()) + " sorts");
    schema.set(pred, arity, std::move(sorts));
  }
  return schema;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  auto end_row = [&] {
    if (field_started || !row.empty()) {
      row.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    row.clear();
    field.clear();
    field_started = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw InputError("MalformedCsv", "line " + std::to_string(line) + ": quote inside an unquoted field");
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw InputError("MalformedCsv", "unterminated quoted field");
  end_row();
  return rows;
}

Signature signature_of(const std::vector<ExistentialRule>& rules) {
  Signature sig;
  auto add = [&](const Atom& a) {
    if (a.pred.kind() == PredKind::Ordinary) sig.emplace(a.pred.to_string(), a.pred.arity());
  };
  for (const auto& r : rules) {
    for (const auto& b : body_of(r)) add(b);
    if (const auto* tgd = std::get_if<Tgd>(&r))
      for (const auto& h : tgd->head) add(h);
  }
  return sig;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("IoError", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_rows(Instance& out, const std::string& name, const std::vector<std::vector<std::string>>& rows,
              const Signature& signature, const std::string& source) {
  auto it = signature.find(name);
  if (it == signature.end())
    throw InputError("UnknownPredicate", source + ": predicate " + name + " does not occur in the rules");
  Pred pred = Pred::ordinary(name, it->second);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != it->second)
      throw InputError("ArityMismatch", source + ", row " + std::to_string(r + 1) + ": expected " +
                                            std::to_string(it->second) + " columns, got " +
                                            std::to_string(rows[r].size()));
    std::vector<Term> args;
    for (const auto& v : rows[r]) args.push_back(Term::constant(v));
    out.insert(Atom(pred, std::move(args)));
  }
}

Instance parse_instance(const std::filesystem::path& dir, const Signature& signature) {
  Instance out;
  if (!std::filesystem::is_directory(dir)) throw InputError("IoError", dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files)
    add_rows(out, file.stem().string(), parse_csv(read_file(file)), signature, file.filename().string());
  return out;
}

std::string serialize_program(const std::vector<Rule>& rules) {
  std::vector<std::pair<std::string, std::string>> keyed;
  keyed.reserve(rules.size());
  for (const auto& r : rules) keyed.emplace_back(r.head.pred.to_string(), r.to_string());
  std::sort(keyed.begin(), keyed.end());
  std::string out;
  for (const auto& [k, text] : keyed) out += text + "\n";
  return out;
}

std::string serialize_rules(const std::vector<ExistentialRule>& rules) {
  std::string out;
  for (const auto& r : rules) out += to_string(r) + "\n";
  return out;
}

std::optional<Pred> find_predicate(const std::vector<ExistentialRule>& rules, const std::string& name) {
  auto sig = signature_of(rules);
  auto it = sig.find(name);
  if (it == sig.end()) return std::nullopt;
  return Pred::ordinary(name, it->second);
}

void validate_scenario(const Scenario& s) {
  const Pred q = s.query;
  for (std::size_t i = 0; i < s.rules.size(); ++i) {
    const auto& r = s.rules[i];
    for (const auto& b : body_of(r))
      if (b.pred == q)
        throw InputError("QueryInBody", "rule " + std::to_string(i + 1) + " uses the query predicate in its body");
    if (const auto* tgd = std::get_if<Tgd>(&r)) {
      for (const auto& h : tgd->head) {
        if (h.pred != q) continue;
        if (tgd->head.size() != 1)
          throw InputError("QueryHead", "rule " + std::to_string(i + 1) + ": the query atom must be the only head atom");
        for (Term t : h.args)
          if (std::find(tgd->existentials.begin(), tgd->existentials.end(), t) != tgd->existentials.end())
            throw InputError("QueryExistential",
                             "rule " + std::to_string(i + 1) + ": query predicate under an existential quantifier");
      }
    }
  }
  auto sig = signature_of(s.rules);
  bool ok = true;
  std::string bad;
  s.base.for_each([&](const Atom& f) {
    if (!ok) return;
    if (f.pred.kind() != PredKind::Ordinary || !sig.count(f.pred.to_string()) || !f.is_ground()) {
      ok = false;
      bad = f.to_string();
      return;
    }
    for (Term t : f.args)
      if (!t.is_constant()) {
        ok = false;
        bad = f.to_string();
      }
  });
  if (!ok) throw InputError("BadBaseFact", "base fact " + bad + " is not a function-free fact over the rules' predicates");
}

Scenario load_scenario(const std::filesystem::path& rules_file, const std::filesystem::path& data_dir,
                       const std::optional<std::filesystem::path>& schema_file, const std::string& query_pred,
                       bool una_known) {
  Scenario s;
  s.rules = parse_rules(read_file(rules_file));
  auto q = find_predicate(s.rules, query_pred);
  if (!q) throw InputError("UnknownQuery", "query predicate " + query_pred + " does not occur in the rules");
  s.query = *q;
  s.base = parse_instance(data_dir, signature_of(s.rules));
  if (schema_file) s.schema = parse_schema(read_file(*schema_file));
  s.una_known = una_known;
  validate_scenario(s);
  return s;
}

}  // namespace chasegoal
