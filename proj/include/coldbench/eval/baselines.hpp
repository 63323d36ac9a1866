#pragma once

#include <string>
#include <vector>

#include "coldbench/eval/bootstrap.hpp"

namespace coldbench::eval {

/// Predictor that ignores the fridge: it keeps its own idea of the contents
/// and emits a uniformly random valid step each time. Durations are copied
/// from `steps` when given, otherwise zero.
std::vector<ExperimentStep> random_baseline(const std::vector<GroundTruthStep>& script,
                                            const std::vector<std::string>& items, std::size_t position_count,
                                            std::uint64_t seed);
std::vector<ExperimentStep> random_baseline(const std::vector<ExperimentStep>& steps,
                                            const std::vector<std::string>& items, std::size_t position_count,
                                            std::uint64_t seed);

/// Barcode scanning: always correct, and every add takes `add_overhead_s`
/// longer than its baseline. Other steps run at baseline speed.
std::vector<ExperimentStep> barcode_baseline(const std::vector<ExperimentStep>& steps, double add_overhead_s);

}  // namespace coldbench::eval
