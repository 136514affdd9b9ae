#pragma once

// Text formats: rule files, logic programs, CSV base instances and schema
// sidecars.
//
// Rule file (one rule per line, `#` starts a comment):
//     A(?x), R(?x,?y) -> Q(?x)
//     S(?x,?z) -> R(?x,?y)          # ?y is existential
//     T(?x,?y) -> ?x = ?y           # EGD
// Constants are bare alphanumerics or single-quoted strings ('' escapes a
// quote). A trailing '.' is accepted.
//
// Logic programs use `head :- body.` with `=` for equality, function terms
// `f(?x)`, and tagged predicates `m_R#bf`, `m_=#~b`, `fun#g`.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chasegoal/kernel.hpp"

namespace chasegoal {

/// Sort of each (predicate, position); positions without an entry are unsorted.
class Schema {
 public:
  void set(const std::string& pred, std::size_t arity, std::vector<std::string> sorts);
  std::optional<std::string> sort_of(Pred p, std::size_t pos) const;
  bool has(Pred p) const;
  bool empty() const { return sorts_.empty(); }

 private:
  std::map<std::pair<std::string, std::size_t>, std::vector<std::string>> sorts_;
};

/// Predicate name -> arity for the ordinary predicates of a rule set.
using Signature = std::map<std::string, std::size_t>;

struct Scenario {
  std::vector<ExistentialRule> rules;
  Pred query;
  Instance base;
  std::optional<Schema> schema;
  bool una_known = false;
};

std::vector<ExistentialRule> parse_rules(std::string_view text);
std::vector<Rule> parse_program(std::string_view text);
Schema parse_schema(std::string_view text);

/// RFC-4180 rows (no header). Empty lines are skipped.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

Signature signature_of(const std::vector<ExistentialRule>& rules);

/// Loads every `<pred>.csv` in dir as facts of that predicate.
Instance parse_instance(const std::filesystem::path& dir, const Signature& signature);
/// Adds one table of constants for predicate `name`; `source` labels errors.
void add_rows(Instance& out, const std::string& name, const std::vector<std::vector<std::string>>& rows,
              const Signature& signature, const std::string& source);

/// Deterministic text: rules sorted by head predicate, then by rule text.
std::string serialize_program(const std::vector<Rule>& rules);
/// Rule-file text, one rule per line, in input order.
std::string serialize_rules(const std::vector<ExistentialRule>& rules);

/// Checks the query predicate and base-instance contracts.
void validate_scenario(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& rules_file, const std::filesystem::path& data_dir,
                       const std::optional<std::filesystem::path>& schema_file,
                       const std::string& query_pred, bool una_known);

/// Looks up the ordinary predicate `name` among the rules' predicates.
std::optional<Pred> find_predicate(const std::vector<ExistentialRule>& rules, const std::string& name);

std::string read_file(const std::filesystem::path& path);

}  // namespace chasegoal
