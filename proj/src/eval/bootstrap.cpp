#include "coldbench/eval/bootstrap.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "coldbench/eval/stats.hpp"

namespace coldbench::eval {

SubsampleResult evaluate_subset(const std::vector<ExperimentStep>& steps, std::vector<std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("empty subsample");
  ConfusionCounts counts;
  double overhead = 0.0;
  for (const std::size_t i : indices) {
    counts.add(steps.at(i).truth);
    overhead += steps[i].overhead_s();
  }
  const Metrics m = compute_metrics(counts);
  SubsampleResult r;
  r.indices = std::move(indices);
  r.precision = m.precision;
  r.accuracy = m.accuracy;
  r.mean_overhead_s = overhead / static_cast<double>(r.indices.size());
  return r;
}

std::vector<SubsampleResult> bootstrap(const std::vector<ExperimentStep>& steps, std::size_t n_subsamples,
                                       std::size_t subsample_size, std::uint64_t seed) {
  if (subsample_size == 0) throw std::invalid_argument("subsample size must be positive");
  if (steps.size() < subsample_size) {
    throw std::invalid_argument("need at least " + std::to_string(subsample_size) + " steps, have " +
                                std::to_string(steps.size()));
  }
  Rng rng(seed);
  std::vector<std::size_t> all(steps.size());
  std::iota(all.begin(), all.end(), 0);

  std::vector<SubsampleResult> results;
  results.reserve(n_subsamples);
  for (std::size_t s = 0; s < n_subsamples; ++s) {
    std::vector<std::size_t> picked;
    picked.reserve(subsample_size);
    std::sample(all.begin(), all.end(), std::back_inserter(picked), subsample_size, rng);
    results.push_back(evaluate_subset(steps, std::move(picked)));
  }
  return results;
}

std::vector<CurvePoint> overhead_curve(const std::vector<SubsampleResult>& results, const std::vector<double>& xs) {
  std::vector<CurvePoint> curve;
  for (const double x : xs) {
    std::vector<double> pe, ae;
    for (const auto& r : results) {
      if (!(r.mean_overhead_s < x)) continue;
      ae.push_back(1.0 - r.accuracy);
      if (r.precision) pe.push_back(1.0 - *r.precision);
    }
    if (ae.empty()) continue;
    CurvePoint p;
    p.x = x;
    p.subsamples = ae.size();
    p.precision_subsamples = pe.size();
    if (!pe.empty()) {
      p.precision_error_mean = mean(pe);
      p.precision_error_stderr = standard_error(pe);
    }
    p.accuracy_error_mean = mean(ae);
    p.accuracy_error_stderr = standard_error(ae);
    curve.push_back(p);
  }
  return curve;
}

}  // namespace coldbench::eval
