// coldbench: evaluation, service and simulation front end.
//
//   coldbench eval   --flavor soda --steps 50 --seed 1 --out results/
//   coldbench serve  --port 8080 --data-dir data/ --demo --console console/
//   coldbench sim    script.txt --trace out.trace
//   coldbench replay out.trace
//   coldbench config > config/default.json

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "coldbench/detection/engine.hpp"
#include "coldbench/eval/experiment.hpp"
#include "coldbench/eval/report.hpp"
#include "coldbench/service/codec.hpp"
#include "coldbench/service/http_server.hpp"
#include "coldbench/testbed/virtual_fridge.hpp"

namespace cb = coldbench;

namespace {

cb::testbed::TestbedConfig config_or_default(const std::string& path) {
  return path.empty() ? cb::testbed::default_config() : cb::testbed::load_config(path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cb::service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coldbench: smart-fridge testbed"};
  app.require_subcommand(1);

  std::string config_path;

  auto* eval = app.add_subcommand("eval", "Run a scripted experiment and write the evaluation outputs");
  cb::eval::ExperimentOptions exp;
  cb::eval::AnalysisOptions ana;
  std::string out_dir = "results";
  std::string baseline = "none";
  eval->add_option("--flavor", exp.flavor, "Item flavor")->check(CLI::IsMember({"soda", "mix"}));
  eval->add_option("--steps", exp.steps, "Script length")->check(CLI::PositiveNumber);
  eval->add_option("--seed", exp.seed, "Run seed");
  eval->add_option("--config", config_path, "Testbed configuration (JSON)")->check(CLI::ExistingFile);
  eval->add_option("--out", out_dir, "Output directory");
  eval->add_option("--baseline", baseline, "Describe a baseline in the CSV files")
      ->check(CLI::IsMember({"none", "random", "barcode"}));
  eval->add_option("--subsamples", ana.subsamples, "Bootstrap subsample count")->check(CLI::PositiveNumber);
  eval->add_option("--subsample-size", ana.subsample_size, "Steps per subsample")->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Run the fridge web service");
  cb::service::ServerOptions srv;
  std::string data_dir;
  std::string console_dir;
  std::size_t positions = 4;
  serve->add_option("--host", srv.host, "Bind address");
  serve->add_option("--port", srv.port, "Port (0 picks one)");
  serve->add_option("--data-dir", data_dir, "Directory for the per-fridge logs");
  serve->add_option("--positions", positions, "Positions per fridge")->check(CLI::PositiveNumber);
  serve->add_flag("--demo", srv.demo, "Enable the simulated-fridge control endpoint");
  serve->add_option("--demo-flavor", srv.demo_flavor, "Catalog of the demo fridges")
      ->check(CLI::IsMember({"soda", "mix"}));
  serve->add_option("--demo-seed", srv.demo_seed, "Seed of the demo fridges");
  serve->add_option("--console", console_dir, "Static console directory served under /console/")
      ->check(CLI::ExistingDirectory);
  serve->add_option("--config", config_path, "Testbed configuration (JSON)")->check(CLI::ExistingFile);
  serve->add_option("--margin", srv.takeout.margin, "Expiry alert margin over the mean dwell time");

  auto* simc = app.add_subcommand("sim", "Drive a virtual fridge with a command script");
  std::string script_path;
  std::string trace_path;
  std::uint64_t sim_seed = 1;
  std::string sim_flavor = "mix";
  simc->add_option("script", script_path, "Command script")->required()->check(CLI::ExistingFile);
  simc->add_option("--trace", trace_path, "Write the replayable trace here");
  simc->add_option("--seed", sim_seed, "Seed");
  simc->add_option("--flavor", sim_flavor, "Item flavor")->check(CLI::IsMember({"soda", "mix"}));
  simc->add_option("--config", config_path, "Testbed configuration (JSON)")->check(CLI::ExistingFile);

  auto* replay = app.add_subcommand("replay", "Run the detection engine over a recorded trace");
  std::string replay_path;
  replay->add_option("trace", replay_path, "Trace file")->required()->check(CLI::ExistingFile);
  replay->add_option("--config", config_path, "Testbed configuration (JSON)")->check(CLI::ExistingFile);

  auto* dump = app.add_subcommand("config", "Print the effective testbed configuration as JSON");
  dump->add_option("--config", config_path, "Testbed configuration (JSON)")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = config_or_default(config_path);

    if (*dump) {
      std::cout << cb::testbed::config_to_json(config).dump(2) << '\n';
      return 0;
    }

    if (*eval) {
      ana.seed = exp.seed;
      ana.barcode_overhead_s = config.barcode_overhead_s;
      const auto run = cb::eval::run_experiment(config, exp);
      const auto analysis = cb::eval::analyze(run, ana);
      const auto view = baseline == "random"    ? cb::eval::BaselineView::random
                        : baseline == "barcode" ? cb::eval::BaselineView::barcode
                                                : cb::eval::BaselineView::none;
      cb::eval::write_outputs(out_dir, analysis, run, view);
      std::cout << cb::eval::summary_to_json(analysis.summary).dump(2) << '\n';
      return 0;
    }

    if (*serve) {
      cb::service::ServiceOptions opts;
      if (!data_dir.empty()) opts.data_dir = data_dir;
      opts.position_count = positions;
      cb::service::FridgeService service(opts);
      srv.testbed = config;
      if (!console_dir.empty()) srv.console_dir = console_dir;
      cb::service::HttpServer server(service, srv);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << srv.host << ":" << srv.port << (srv.demo ? " (demo)" : "") << '\n';
      const bool ok = server.run();
      service.shutdown();
      g_server = nullptr;
      return ok ? 0 : 1;
    }

    if (*simc) {
      cb::testbed::VirtualFridge fridge(config.with_flavor(sim_flavor), sim_seed);
      fridge.set_sink([](const cb::detection::DetectionEvent& e) { std::cout << nlohmann::json(e).dump() << '\n'; });
      const auto commands = cb::sim::parse_script(read_file(script_path));
      for (std::size_t i = 0; i < commands.size(); ++i) {
        try {
          fridge.execute(commands[i]);
        } catch (const std::exception& e) {
          throw cb::sim::ScriptError(i + 1, e.what());
        }
      }
      if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        cb::detection::write_trace(out, fridge.trace());
      }
      return 0;
    }

    if (*replay) {
      const auto trace = cb::detection::read_trace_file(replay_path);
      for (const auto& e : cb::detection::replay(trace, config.engine)) {
        std::cout << nlohmann::json(e).dump() << '\n';
      }
      return 0;
    }
  } catch (const cb::sim::ScriptError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
