#pragma once

#include <optional>
#include <vector>

#include "coldbench/eval/metrics.hpp"

namespace coldbench::eval {

struct ExperimentStep {
  GroundTruthStep ground_truth;
  Prediction predicted;
  Truth truth = Truth::tn;
  /// Door-open time of the instrumented step (virtual seconds).
  double door_open_duration_s = 0.0;
  /// Door-open time of the same step without any recognition feedback.
  double baseline_duration_s = 0.0;

  double overhead_s() const { return door_open_duration_s - baseline_duration_s; }
};

struct SubsampleResult {
  std::vector<std::size_t> indices;
  std::optional<double> precision;
  double accuracy = 0.0;
  double mean_overhead_s = 0.0;
};

/// `n_subsamples` subsets of `subsample_size` distinct steps each.
/// Throws std::invalid_argument if there are fewer steps than that.
std::vector<SubsampleResult> bootstrap(const std::vector<ExperimentStep>& steps, std::size_t n_subsamples,
                                       std::size_t subsample_size, std::uint64_t seed);

/// Metrics over an explicit subset.
SubsampleResult evaluate_subset(const std::vector<ExperimentStep>& steps, std::vector<std::size_t> indices);

struct CurvePoint {
  double x = 0.0;
  std::size_t subsamples = 0;
  /// Over subsamples that have a precision.
  std::size_t precision_subsamples = 0;
  double precision_error_mean = 0.0, precision_error_stderr = 0.0;
  double accuracy_error_mean = 0.0, accuracy_error_stderr = 0.0;
};

/// For each x, PE and AE over the subsamples whose mean overhead is below x.
/// Values of x without a qualifying subsample are skipped.
std::vector<CurvePoint> overhead_curve(const std::vector<SubsampleResult>& results,
                                       const std::vector<double>& xs = {2, 3, 4, 5, 6, 7, 8, 9, 10});

}  // namespace coldbench::eval
