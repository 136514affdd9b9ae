// chasegoal run --rules FILE --data DIR --query-pred NAME --mode all --out DIR
//
// Exit codes: 0 success, 1 input or contract error, 2 termination guard tripped.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <json.hpp>

#include "chasegoal/driver.hpp"
#include "chasegoal/errors.hpp"

namespace {

void write_guard_stats(const std::filesystem::path& path, const chasegoal::GuardError& e, const std::string& mode) {
  nlohmann::ordered_json j;
  j["mode"] = mode;
  j["guard_status"] = e.kind();
  j["message"] = e.message();
  std::ofstream out(path);
  if (out) out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal-driven query answering for existential rules with equality"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "answer the query predicate over a base instance");

  std::string rules_file, data_dir, query_pred, mode = "all", out_dir, schema_file, stats_file, dump;
  bool una = false, typed = false, defun_abstraction = false;
  unsigned max_depth = 20;
  std::size_t max_facts = 10'000'000;

  run->add_option("--rules", rules_file, "rule file")->required()->check(CLI::ExistingFile);
  run->add_option("--data", data_dir, "directory of <pred>.csv files")->required()->check(CLI::ExistingDirectory);
  run->add_option("--schema", schema_file, "sort sidecar (pred/arity: sort,...)")->check(CLI::ExistingFile);
  run->add_option("--query-pred", query_pred, "query predicate")->required();
  run->add_option("--mode", mode, "pipeline variant")->check(CLI::IsMember({"mat", "rel", "magic", "all"}));
  run->add_flag("--una", una, "rules and data are known to satisfy the unique name assumption");
  run->add_flag("--typed-critical", typed, "use the typed critical instance (requires --schema)");
  run->add_flag("--defun-abstraction", defun_abstraction,
                "abstract function terms to constants before the relevance fixpoint");
  run->add_option("--max-depth", max_depth, "term depth guard (0 disables)");
  run->add_option("--max-facts", max_facts, "fact count guard (0 disables)");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--stats-json", stats_file, "stats file (default <out>/stats.json)");
  run->add_option("--dump-stage", dump, "print the program after a stage")
      ->check(CLI::IsMember({"sg", "sk", "rel", "magic", "defun", "desg"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  std::optional<std::filesystem::path> stats_path;
  if (!stats_file.empty()) stats_path = stats_file;

  try {
    std::optional<std::filesystem::path> schema;
    if (!schema_file.empty()) schema = schema_file;
    auto scenario = chasegoal::load_scenario(rules_file, data_dir, schema, query_pred, una);

    chasegoal::PipelineConfig cfg;
    cfg.mode = chasegoal::parse_mode(mode);
    cfg.una_known = una;
    cfg.typed_critical = typed;
    cfg.defun_abstraction = defun_abstraction;
    cfg.limits.max_depth = max_depth;
    cfg.limits.max_facts = max_facts;

    try {
      auto report = chasegoal::run_pipeline(scenario, cfg);
      if (!dump.empty()) std::cout << chasegoal::dump_stage(report, dump);
      chasegoal::emit_report(report, out_dir, stats_path);
      std::cerr << report.answers.size() << " answers, " << report.derived_facts() << " derived facts\n";
    } catch (const chasegoal::GuardError& e) {
      std::filesystem::create_directories(out_dir);
      write_guard_stats(stats_path.value_or(std::filesystem::path(out_dir) / "stats.json"), e, mode);
      std::cerr << "guard tripped: " << e.what() << "\n";
      return 2;
    }
  } catch (const chasegoal::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
