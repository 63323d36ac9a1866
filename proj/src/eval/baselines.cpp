#include "coldbench/eval/baselines.hpp"

#include <stdexcept>

namespace coldbench::eval {

using detection::Action;

std::vector<ExperimentStep> random_baseline(const std::vector<ExperimentStep>& steps,
                                            const std::vector<std::string>& items, std::size_t position_count,
                                            std::uint64_t seed) {
  // The random predictor is a script generator of its own, replayed
  // alongside the real one.
  const auto guesses = generate_script(std::max<std::size_t>(steps.size(), 1), items, position_count, seed);
  std::vector<ExperimentStep> out;
  out.reserve(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    ExperimentStep step = steps[i];
    step.predicted = perfect_prediction(guesses[i]);
    step.truth = classify(step.ground_truth, step.predicted);
    out.push_back(std::move(step));
  }
  return out;
}

std::vector<ExperimentStep> random_baseline(const std::vector<GroundTruthStep>& script,
                                            const std::vector<std::string>& items, std::size_t position_count,
                                            std::uint64_t seed) {
  std::vector<ExperimentStep> steps;
  steps.reserve(script.size());
  for (const auto& gt : script) steps.push_back(ExperimentStep{gt, {}, Truth::tn, 0.0, 0.0});
  return random_baseline(steps, items, position_count, seed);
}

std::vector<ExperimentStep> barcode_baseline(const std::vector<ExperimentStep>& steps, double add_overhead_s) {
  if (add_overhead_s < 0) throw std::invalid_argument("barcode overhead must be non-negative");
  std::vector<ExperimentStep> out;
  out.reserve(steps.size());
  for (const auto& s : steps) {
    ExperimentStep step = s;
    step.predicted = perfect_prediction(step.ground_truth);
    step.truth = classify(step.ground_truth, step.predicted);
    step.door_open_duration_s =
        step.baseline_duration_s + (step.ground_truth.action == Action::add ? add_overhead_s : 0.0);
    out.push_back(std::move(step));
  }
  return out;
}

}  // namespace coldbench::eval
