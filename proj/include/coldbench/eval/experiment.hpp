#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coldbench/detection/types.hpp"
#include "coldbench/eval/bootstrap.hpp"
#include "coldbench/testbed/config.hpp"

namespace coldbench::eval {

struct ExperimentOptions {
  std::string flavor = "soda";
  std::size_t steps = 50;
  std::uint64_t seed = 1;
};

struct ExperimentRun {
  std::string flavor;
  std::uint64_t seed = 0;
  std::vector<std::string> items;
  std::vector<ExperimentStep> steps;
  std::vector<detection::DetectionEvent> events;
  Millis virtual_duration_ms = 0;
};

/// Plays a random script against a fresh virtual fridge with a simulated
/// person who, when adding, holds the door until the recognizer has
/// answered and then puts the item down.
///
/// Each step is one door opening; its prediction is made of the add/remove
/// events of that activity, with item names as known at the end of the run.
ExperimentRun run_experiment(const testbed::TestbedConfig& config, const ExperimentOptions& options);

/// Prediction for one activity's position events. `names` resolves the
/// final name of each item record. Step i runs as activity i + 1, so a
/// record's activity identifies the add step it came from.
Prediction predict_from_events(const std::vector<detection::DetectionEvent>& activity_events,
                               const std::function<std::optional<std::string>(ItemId)>& names);

}  // namespace coldbench::eval
