#pragma once

// End-to-end query answering: singularize, Skolemize, optionally prune by
// relevance and apply magic sets, remove body constants/functions/equalities,
// chase, and read the answers off the representative classes.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chasegoal/chase.hpp"
#include "chasegoal/frontend.hpp"
#include "chasegoal/magic.hpp"
#include "chasegoal/relevance.hpp"

namespace chasegoal {

enum class Mode { Materialization, RelevanceOnly, MagicOnly, All };

/// "mat", "rel", "magic", "all".
Mode parse_mode(const std::string& text);
std::string mode_name(Mode mode);

struct PipelineConfig {
  Mode mode = Mode::All;
  /// Either this or Scenario::una_known enables the UNA rewrite in relevance.
  bool una_known = false;
  /// Insist on the typed critical instance (needs a schema). With a schema the
  /// typed instance is used anyway.
  bool typed_critical = false;
  /// Abstract function terms to constants before the relevance fixpoint instead
  /// of only after it diverges.
  bool defun_abstraction = false;
  Limits limits;
  Limits relevance_limits{16, 2'000'000};
  SipsConfig sips;
  std::optional<std::uint64_t> scheduler_seed;
  bool record_derived = false;
};

struct StageInfo {
  std::string name;
  std::size_t rules = 0;
  double millis = 0;
};

struct RunReport {
  Mode mode = Mode::All;
  AnswerSet answers;
  std::vector<StageInfo> stages;
  ChaseResult chase;
  bool function_abstraction = false;
  std::size_t removed_equalities = 0;

  std::vector<ExistentialRule> sg;
  Program sk, rel, magic, defun, desg;

  std::size_t derived_facts() const { return chase.stats.derived_facts; }
  double total_millis() const;
};

/// Errors keep their type; the message is prefixed with the failing stage.
RunReport run_pipeline(const Scenario& scenario, const PipelineConfig& config);

/// Text of one stage ("sg", "sk", "rel", "magic", "defun", "desg").
std::string dump_stage(const RunReport& report, const std::string& stage);

/// Sorted rows, one tuple per line.
std::string answers_csv(const AnswerSet& answers);
std::string stats_json(const RunReport& report);

/// Writes <out_dir>/answers.csv and the stats document (stats_path, or
/// <out_dir>/stats.json when empty).
void emit_report(const RunReport& report, const std::filesystem::path& out_dir,
                 const std::optional<std::filesystem::path>& stats_path = std::nullopt);

}  // namespace chasegoal
