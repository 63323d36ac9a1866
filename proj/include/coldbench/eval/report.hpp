#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coldbench/eval/experiment.hpp"
#include "coldbench/eval/stats.hpp"

namespace coldbench::eval {

struct AnalysisOptions {
  std::size_t subsamples = 100;
  std::size_t subsample_size = 10;
  std::uint64_t seed = 1;
  double barcode_overhead_s = 4.1;
};

/// Summary statistics of one run, one field per results-table row.
struct Summary {
  std::string flavor;
  std::size_t steps = 0;
  std::optional<double> mean_precision;
  double mean_accuracy = 0.0;
  std::optional<double> correct_item_ratio_add;
  /// Total overhead over total baseline time.
  double overhead_vs_baseline = 0.0;
  std::optional<double> add_overhead_s;
  std::optional<double> remove_none_overhead_s;
  /// Relative change of the mean add interaction time versus barcode scanning.
  std::optional<double> overhead_vs_barcode;
  std::optional<TTest> nh_precision;  // main vs random baseline
  std::optional<TTest> nh_accuracy;   // main vs random baseline
  std::optional<TTest> nh_barcode;    // add overheads, image vs barcode
  std::optional<double> random_mean_precision;
  double random_mean_accuracy = 0.0;
  ConfusionCounts counts;
};

struct Analysis {
  AnalysisOptions options;
  Summary summary;
  std::vector<SubsampleResult> subsamples;
  std::vector<CurvePoint> curve;
  std::vector<ExperimentStep> random_steps;
  std::vector<SubsampleResult> random_subsamples;
  std::vector<ExperimentStep> barcode_steps;
};

/// Mean over the subsamples that have a precision.
std::optional<double> mean_precision(const std::vector<SubsampleResult>& results);
double mean_accuracy(const std::vector<SubsampleResult>& results);

Analysis analyze(const ExperimentRun& run, const AnalysisOptions& options);

/// Summary keyed by the results-table row names.
nlohmann::json summary_to_json(const Summary& summary);

std::string steps_csv(const std::vector<ExperimentStep>& steps);
std::string subsamples_csv(const std::vector<SubsampleResult>& results);
std::string curve_csv(const std::vector<CurvePoint>& curve);

enum class BaselineView { none, random, barcode };

/// Writes steps.csv, subsamples.csv, curve.csv and summary.json to `dir`.
/// With a baseline view, the CSV files describe that baseline's steps.
void write_outputs(const std::filesystem::path& dir, const Analysis& analysis, const ExperimentRun& run,
                   BaselineView view = BaselineView::none);

}  // namespace coldbench::eval
