// Python bindings. Structured values cross the boundary as JSON text and are
// decoded by the coldbench package.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coldbench/detection/engine.hpp"
#include "coldbench/detection/trace.hpp"
#include "coldbench/eval/experiment.hpp"
#include "coldbench/eval/metrics.hpp"
#include "coldbench/eval/report.hpp"
#include "coldbench/eval/script.hpp"
#include "coldbench/eval/stats.hpp"
#include "coldbench/service/codec.hpp"
#include "coldbench/service/fridge_service.hpp"
#include "coldbench/testbed/config.hpp"

namespace py = pybind11;
using namespace coldbench;
using nlohmann::json;

namespace {

testbed::TestbedConfig config_of(const std::optional<std::string>& config_json) {
  return config_json ? testbed::config_from_json(json::parse(*config_json)) : testbed::default_config();
}

std::string run(const std::string& flavor, std::size_t steps, std::uint64_t seed,
                const std::optional<std::string>& config_json) {
  const auto config = config_of(config_json);
  eval::ExperimentRun result;
  {
    py::gil_scoped_release release;
    result = eval::run_experiment(config, {flavor, steps, seed});
  }
  eval::AnalysisOptions options;
  options.seed = seed;
  options.barcode_overhead_s = config.barcode_overhead_s;
  const auto analysis = eval::analyze(result, options);
  json truths = json::array();
  for (const auto& s : result.steps) truths.push_back(eval::to_string(s.truth));
  return json{{"summary", eval::summary_to_json(analysis.summary)}, {"truths", truths}}.dump();
}

std::string replay(const std::string& trace_text, const std::optional<std::string>& config_json) {
  const auto config = config_of(config_json);
  return json(detection::replay(detection::parse_trace(trace_text), config.engine)).dump();
}

std::string script(std::size_t steps, const std::vector<std::string>& items, std::size_t positions,
                   std::uint64_t seed) {
  json out = json::array();
  for (const auto& s : eval::generate_script(steps, items, positions, seed)) out.push_back(eval::describe(s));
  return out.dump();
}

py::dict metrics(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  const auto m = eval::compute_metrics({tp, fp, tn, fn});
  py::dict d;
  d["precision"] = m.precision ? py::cast(*m.precision) : py::none();
  d["accuracy"] = m.accuracy;
  d["precision_error"] = m.precision_error ? py::cast(*m.precision_error) : py::none();
  d["accuracy_error"] = m.accuracy_error;
  return d;
}

py::dict welch(const std::vector<double>& a, const std::vector<double>& b) {
  const auto t = eval::welch_t_test(a, b);
  py::dict d;
  d["t"] = t.t;
  d["df"] = t.df;
  d["p_value"] = t.p_value;
  return d;
}

class Service {
 public:
  explicit Service(std::optional<std::string> data_dir) {
    service::ServiceOptions o;
    if (data_dir) o.data_dir = *data_dir;
    svc_ = std::make_unique<service::FridgeService>(std::move(o));
  }
  std::string register_fridge() { return svc_->register_fridge(); }
  std::uint64_t publish(const std::string& id, const std::string& event_json) {
    return svc_->publish(id, json::parse(event_json).get<detection::DetectionEvent>());
  }
  std::string state(const std::string& id) { return json(*svc_->get_state(id)).dump(); }
  std::string history(const std::string& id) { return json(svc_->get_history(id)).dump(); }
  std::string poll(const std::string& id, std::uint64_t cursor, std::int64_t timeout_ms) {
    std::vector<service::EventEnvelope> events;
    {
      py::gil_scoped_release release;
      events = svc_->poll(id, cursor, timeout_ms);
    }
    return json(events).dump();
  }

 private:
  std::unique_ptr<service::FridgeService> svc_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "coldbench native core";
  py::register_exception<NotFound>(m, "NotFound", PyExc_KeyError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("default_config_json", [] { return testbed::config_to_json(testbed::default_config()).dump(); });
  m.def("run_experiment_json", &run, py::arg("flavor"), py::arg("steps"), py::arg("seed"),
        py::arg("config_json") = py::none());
  m.def("replay_json", &replay, py::arg("trace_text"), py::arg("config_json") = py::none());
  m.def("generate_script_json", &script, py::arg("steps"), py::arg("items"), py::arg("positions"), py::arg("seed"));
  m.def("compute_metrics", &metrics, py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"));
  m.def("welch_t_test", &welch, py::arg("a"), py::arg("b"));

  py::class_<Service>(m, "FridgeService")
      .def(py::init<std::optional<std::string>>(), py::arg("data_dir") = py::none())
      .def("register_fridge", &Service::register_fridge)
      .def("publish_json", &Service::publish)
      .def("state_json", &Service::state)
      .def("history_json", &Service::history)
      .def("poll_json", &Service::poll, py::arg("fridge_id"), py::arg("cursor"), py::arg("timeout_ms") = 0);
}
