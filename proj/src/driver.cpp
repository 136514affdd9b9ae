#include "chasegoal/driver.hpp"

#include <chrono>
#include <fstream>
#include <json.hpp>

#include "chasegoal/eqprep.hpp"
#include "chasegoal/errors.hpp"
#include "chasegoal/finalize.hpp"

namespace chasegoal {

Mode parse_mode(const std::string& text) {
  if (text == "mat") return Mode::Materialization;
  if (text == "rel") return Mode::RelevanceOnly;
  if (text == "magic") return Mode::MagicOnly;
  if (text == "all") return Mode::All;
  throw InputError("BadMode", "unknown mode '" + text + "' (expected mat, rel, magic or all)");
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Materialization: return "mat";
    case Mode::RelevanceOnly: return "rel";
    case Mode::MagicOnly: return "magic";
    case Mode::All: return "all";
  }
  return "?";
}

double RunReport::total_millis() const {
  double t = 0;
  for (const auto& s : stages) t += s.millis;
  return t;
}

namespace {

template <class F>
auto in_stage(const std::string& name, RunReport& report, F&& f) {
  auto start = std::chrono::steady_clock::now();
  auto finish = [&](std::size_t rules) {
    std::chrono::duration<double, std::milli> d = std::chrono::steady_clock::now() - start;
    report.stages.push_back({name, rules, d.count()});
  };
  try {
    auto result = f();
    finish(result.second);
    return std::move(result.first);
  } catch (const GuardError& e) {
    throw GuardError(e.kind(), name + ": " + e.message());
  } catch (const InputError& e) {
    throw InputError(e.kind(), name + ": " + e.message());
  } catch (const ContractError& e) {
    throw ContractError(e.kind(), name + ": " + e.message());
  }
}

void require_eq_safe(const std::vector<Rule>& rules) {
  if (auto r = check_eq_safety(rules); !r) throw ContractError("NotEqSafe", r.violations.front());
}

}  // namespace

RunReport run_pipeline(const Scenario& scenario, const PipelineConfig& config) {
  RunReport report;
  report.mode = config.mode;
  const bool relevance_on = config.mode == Mode::RelevanceOnly || config.mode == Mode::All;
  const bool magic_on = config.mode == Mode::MagicOnly || config.mode == Mode::All;
  if (config.typed_critical && !scenario.schema)
    throw InputError("MissingSchema", "the typed critical instance needs a schema");

  report.sg = in_stage("sg", report, [&] {
    auto out = singularize(scenario.rules, scenario.query);
    return std::pair{out, out.size()};
  });
  report.sk = in_stage("sk", report, [&] {
    Program p = skolemize(report.sg, scenario.query);
    require_eq_safe(p.rules);
    return std::pair{p, p.size()};
  });
  report.rel = report.sk;
  if (relevance_on) {
    report.rel = in_stage("rel", report, [&] {
      RelevanceConfig rc;
      rc.una_known = config.una_known || scenario.una_known;
      rc.schema = scenario.schema ? &*scenario.schema : nullptr;
      rc.abstraction = config.defun_abstraction ? FunctionAbstraction::Always : FunctionAbstraction::Auto;
      rc.limits = config.relevance_limits;
      auto r = relevance(report.sk, scenario.base, rc);
      report.function_abstraction = r.function_abstraction;
      report.removed_equalities = r.removed_equalities;
      require_eq_safe(r.program.rules);
      return std::pair{r.program, r.program.size()};
    });
  }
  report.magic = report.rel;
  if (magic_on) {
    report.magic = in_stage("magic", report, [&] {
      auto m = magic(report.rel, config.sips);
      require_eq_safe(m.program.rules);
      return std::pair{m.program, m.program.size()};
    });
  }
  report.defun = in_stage("defun", report, [&] {
    Program p{defunctionalize(report.magic.rules), scenario.query};
    return std::pair{p, p.size()};
  });
  report.desg = in_stage("desg", report, [&] {
    Program p{desingularize(report.defun.rules), scenario.query};
    std::string why;
    if (!chase_ready(p.rules, &why)) throw ContractError("BodyContractViolation", why);
    return std::pair{p, p.size()};
  });
  report.chase = in_stage("chase", report, [&] {
    ChaseOptions opts;
    opts.limits = config.limits;
    opts.scheduler_seed = config.scheduler_seed;
    opts.record_derived = config.record_derived;
    auto result = chase(report.desg.rules, scenario.base, opts);
    std::size_t n = report.desg.size();
    return std::pair{std::move(result), n};
  });
  report.answers = extract_answers(report.chase, scenario.query);
  return report;
}

std::string dump_stage(const RunReport& report, const std::string& stage) {
  if (stage == "sg") return serialize_rules(report.sg);
  if (stage == "sk") return serialize_program(report.sk.rules);
  if (stage == "rel") return serialize_program(report.rel.rules);
  if (stage == "magic") return serialize_program(report.magic.rules);
  if (stage == "defun") return serialize_program(report.defun.rules);
  if (stage == "desg") return serialize_program(report.desg.rules);
  throw InputError("BadStage", "unknown stage '" + stage + "'");
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string answers_csv(const AnswerSet& answers) {
  std::string out;
  for (const auto& t : answers) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out += ",";
      out += csv_field(t[i]);
    }
    out += "\n";
  }
  return out;
}

std::string stats_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["mode"] = mode_name(report.mode);
  j["guard_status"] = "ok";
  j["answers"] = report.answers.size();
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (const auto& s : report.stages) stages.push_back({{"stage", s.name}, {"rules", s.rules}, {"millis", s.millis}});
  j["stages"] = stages;
  j["derived_facts"] = report.chase.stats.derived_facts;
  j["final_facts"] = report.chase.instance.size();
  j["rule_applications"] = report.chase.stats.rule_applications;
  j["rounds"] = report.chase.stats.rounds;
  j["merges"] = report.chase.stats.merges;
  j["function_abstraction"] = report.function_abstraction;
  j["removed_equalities"] = report.removed_equalities;
  j["total_millis"] = report.total_millis();
  return j.dump(2) + "\n";
}

void emit_report(const RunReport& report, const std::filesystem::path& out_dir,
                 const std::optional<std::filesystem::path>& stats_path) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw InputError("IoError", "cannot create " + out_dir.string() + ": " + ec.message());
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError("IoError", "cannot write " + p.string());
    out << text;
  };
  write(out_dir / "answers.csv", answers_csv(report.answers));
  write(stats_path.value_or(out_dir / "stats.json"), stats_json(report));
}

}  // namespace chasegoal
