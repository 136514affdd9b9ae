// Python bindings: run the pipeline on rule text and in-memory tables or on
// files, and inspect the report.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chasegoal/driver.hpp"
#include "chasegoal/errors.hpp"

namespace py = pybind11;
using namespace chasegoal;

namespace {

using Tables = std::map<std::string, std::vector<std::vector<std::string>>>;

struct Options {
  std::string mode = "all";
  bool una = false;
  bool typed_critical = false;
  bool defun_abstraction = false;
  std::optional<unsigned> max_depth;
  std::optional<std::size_t> max_facts;
  std::optional<std::uint64_t> scheduler_seed;
};

PipelineConfig config_of(const Options& o) {
  PipelineConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.una_known = o.una;
  cfg.typed_critical = o.typed_critical;
  cfg.defun_abstraction = o.defun_abstraction;
  if (o.max_depth) cfg.limits.max_depth = *o.max_depth;
  if (o.max_facts) cfg.limits.max_facts = *o.max_facts;
  cfg.scheduler_seed = o.scheduler_seed;
  return cfg;
}

RunReport run_text(const std::string& rules, const Tables& facts, const std::string& query,
                   const std::optional<std::string>& schema, const Options& o) {
  py::gil_scoped_release release;
  Scenario s;
  s.rules = parse_rules(rules);
  auto q = find_predicate(s.rules, query);
  if (!q) throw InputError("UnknownQuery", "query predicate " + query + " does not occur in the rules");
  s.query = *q;
  auto sig = signature_of(s.rules);
  for (const auto& [name, rows] : facts) add_rows(s.base, name, rows, sig, name);
  if (schema) s.schema = parse_schema(*schema);
  s.una_known = o.una;
  validate_scenario(s);
  return run_pipeline(s, config_of(o));
}

RunReport run_files(const std::filesystem::path& rules, const std::filesystem::path& data, const std::string& query,
                    const std::optional<std::filesystem::path>& schema, const Options& o) {
  py::gil_scoped_release release;
  return run_pipeline(load_scenario(rules, data, schema, query, o.una), config_of(o));
}

std::vector<py::tuple> answer_rows(const RunReport& r) {
  std::vector<py::tuple> out;
  for (const auto& t : r.answers) out.push_back(py::cast(t));
  return out;
}

}  // namespace

PYBIND11_MODULE(_chasegoal, m) {
  m.doc() = "Goal-driven query answering for existential rules with equality";

  static py::exception<Error> error(m, "Error");
  static py::exception<GuardError> guard_error(m, "GuardError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    auto raise = [](PyObject* type, const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(type)(e.what());
      inst.attr("kind") = e.kind();
      inst.attr("message") = e.message();
      PyErr_SetObject(type, inst.ptr());
    };
    try {
      if (p) std::rethrow_exception(p);
    } catch (const GuardError& e) {
      raise(guard_error.ptr(), e);
    } catch (const Error& e) {
      raise(error.ptr(), e);
    }
  });

  py::class_<StageInfo>(m, "StageInfo")
      .def_readonly("name", &StageInfo::name)
      .def_readonly("rules", &StageInfo::rules)
      .def_readonly("millis", &StageInfo::millis)
      .def("__repr__", [](const StageInfo& s) {
        return "StageInfo(" + s.name + ", rules=" + std::to_string(s.rules) + ")";
      });

  py::class_<RunReport>(m, "Report")
      .def_property_readonly("mode", [](const RunReport& r) { return mode_name(r.mode); })
      .def_property_readonly("answers", &answer_rows, "Sorted answer tuples")
      .def_property_readonly("stages", [](const RunReport& r) { return r.stages; })
      .def_property_readonly("derived_facts", &RunReport::derived_facts)
      .def_property_readonly("merges", [](const RunReport& r) { return r.chase.stats.merges; })
      .def_property_readonly("rounds", [](const RunReport& r) { return r.chase.stats.rounds; })
      .def_property_readonly("function_abstraction", [](const RunReport& r) { return r.function_abstraction; })
      .def("dump_stage", &dump_stage, py::arg("stage"))
      .def("answers_csv", [](const RunReport& r) { return answers_csv(r.answers); })
      .def("stats_json", &stats_json)
      .def("write", [](const RunReport& r, const std::filesystem::path& out) { emit_report(r, out); },
           py::arg("out_dir"));

  m.def(
      "run",
      [](const std::string& rules, const Tables& facts, const std::string& query, const std::string& mode, bool una,
         bool typed_critical, bool defun_abstraction, std::optional<unsigned> max_depth,
         std::optional<std::size_t> max_facts, std::optional<std::uint64_t> scheduler_seed,
         const std::optional<std::string>& schema) {
        return run_text(rules, facts, query, schema,
                        {mode, una, typed_critical, defun_abstraction, max_depth, max_facts, scheduler_seed});
      },
      py::arg("rules"), py::arg("facts"), py::arg("query"), py::kw_only(), py::arg("mode") = "all",
      py::arg("una") = false, py::arg("typed_critical") = false, py::arg("defun_abstraction") = false,
      py::arg("max_depth") = py::none(), py::arg("max_facts") = py::none(), py::arg("scheduler_seed") = py::none(),
      py::arg("schema") = py::none());

  m.def(
      "run_files",
      [](const std::filesystem::path& rules, const std::filesystem::path& data, const std::string& query,
         const std::string& mode, bool una, bool typed_critical, bool defun_abstraction,
         std::optional<unsigned> max_depth, std::optional<std::size_t> max_facts,
         std::optional<std::uint64_t> scheduler_seed, const std::optional<std::filesystem::path>& schema) {
        return run_files(rules, data, query, schema,
                         {mode, una, typed_critical, defun_abstraction, max_depth, max_facts, scheduler_seed});
      },
      py::arg("rules"), py::arg("data"), py::arg("query"), py::kw_only(), py::arg("mode") = "all",
      py::arg("una") = false, py::arg("typed_critical") = false, py::arg("defun_abstraction") = false,
      py::arg("max_depth") = py::none(), py::arg("max_facts") = py::none(), py::arg("scheduler_seed") = py::none(),
      py::arg("schema") = py::none());
}
