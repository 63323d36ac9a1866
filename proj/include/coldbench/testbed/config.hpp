#pragma once

#include <map>
#include <string>
#include <vector>

#include "coldbench/detection/engine.hpp"
#include "coldbench/recognition/canonicalizer.hpp"
#include "coldbench/recognition/recognizer.hpp"
#include "coldbench/sim/fridge_sim.hpp"

#include <json.hpp>

namespace coldbench::testbed {

/// Uniform ranges (seconds) for the simulated person operating the fridge.
struct HumanTiming {
  double add_reach_min_s = 0.3, add_reach_max_s = 0.8;
  double putdown_min_s = 1.5, putdown_max_s = 2.9;
  double remove_reach_min_s = 0.5, remove_reach_max_s = 1.0;
  double remove_release_min_s = 1.0, remove_release_max_s = 2.0;
  double none_min_s = 1.0, none_max_s = 2.0;
  /// Idle time between steps, long enough for late recognitions to drain.
  double gap_s = 20.0;
  /// Give up waiting for recognition feedback after this long.
  double ack_timeout_s = 30.0;
};

struct Flavor {
  std::string name;
  std::vector<std::string> items;
  double p_hit = 0.77;
  double nonreflective_crosstalk_prob = 0.0;
};

struct TestbedConfig {
  sim::SimConfig sim;
  detection::EngineConfig engine;
  recognition::RecognizerConfig recognizer;
  std::vector<recognition::CanonicalRule> rules;
  std::vector<sim::ItemProfile> catalog;
  HumanTiming timing;
  double barcode_overhead_s = 4.1;
  std::map<std::string, Flavor> flavors;
  /// Largest simulation step between scheduled events.
  Millis tick_ms = 50;

  /// Copy with the flavor's recognizer and crosstalk settings applied.
  TestbedConfig with_flavor(const std::string& flavor) const;
  std::vector<sim::ItemProfile> items_of(const std::string& flavor) const;
  void validate() const;
};

/// Eight-item catalog: four reflective cans, four non-reflective cartons.
std::vector<sim::ItemProfile> default_catalog();
std::map<std::string, std::string> default_raw_phrases();
std::vector<recognition::CanonicalRule> default_rules();

/// Built-in calibrated configuration (identical to config/default.json).
TestbedConfig default_config();

TestbedConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const TestbedConfig& config);
TestbedConfig load_config(const std::string& path);

}  // namespace coldbench::testbed
