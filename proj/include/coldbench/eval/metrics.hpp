#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coldbench/eval/script.hpp"

namespace coldbench::eval {

/// What the system reported for one activity.
struct Prediction {
  detection::Action action = detection::Action::none;
  std::optional<std::string> item;
  std::optional<Position> position;
  /// Add step the reported record originates from.
  std::optional<std::size_t> instance;
  /// Number of add/remove events seen in the activity.
  std::size_t event_count = 0;

  bool operator==(const Prediction&) const = default;
};

enum class Truth { tp, fp, tn, fn };

std::string_view to_string(Truth truth);

/// Negative = none. A positive prediction is a true positive only when the
/// action, position, item and (when known on both sides) item instance all
/// match. For removes the predicted item is whatever the system held at that
/// position. Any mismatch, or more than one event in the activity, is a false
/// positive. Predicting none for a real action is a false negative.
Truth classify(const GroundTruthStep& gt, const Prediction& pred);

/// Prediction that reproduces `gt` exactly.
Prediction perfect_prediction(const GroundTruthStep& gt);

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  void add(Truth truth);
  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  /// Absent when nothing was predicted positive.
  std::optional<double> precision;
  double accuracy = 0.0;
  std::optional<double> precision_error;
  double accuracy_error = 0.0;
};

/// Throws std::invalid_argument on zero steps.
Metrics compute_metrics(const ConfusionCounts& counts);

ConfusionCounts count(const std::vector<Truth>& truths);

}  // namespace coldbench::eval
