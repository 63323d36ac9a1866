#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "coldbench/detection/types.hpp"

namespace coldbench::detection {

/// Sliding-window filter for one proximity sensor.
///
/// The window keeps the last `window_size` raw readings regardless of door
/// state. Window means are only produced once `window_size` readings have
/// arrived inside the current activity period; each such mean updates the
/// activity's minimum, maximum and last value.
class PositionStats {
 public:
  explicit PositionStats(std::size_t window_size = 5);

  void ingest(double value, bool activity_open);

  /// Clears the per-activity statistics. The raw window is kept.
  void reset_activity();

  std::size_t window_size() const { return window_size_; }
  std::size_t readings_in_activity() const { return readings_in_activity_; }
  bool has_window_mean() const { return last_.has_value(); }

  std::optional<double> window_mean() const;
  std::optional<double> minval() const { return min_; }
  std::optional<double> maxval() const { return max_; }
  std::optional<double> lastval() const { return last_; }

  /// The raw window, oldest first.
  std::vector<double> window() const;

 private:
  std::size_t window_size_;
  std::vector<double> ring_;
  std::size_t head_ = 0;
  std::size_t filled_ = 0;
  std::size_t readings_in_activity_ = 0;
  std::optional<double> min_;
  std::optional<double> max_;
  std::optional<double> last_;
};

/// Functional form of PositionStats::ingest.
PositionStats ingest_reading(PositionStats stats, double value, bool activity_open);

/// Add/remove decision for one position at the end of an activity.
/// Add is tested first: (minval < it_min or maxval > it_max) and the position
/// is free. Remove: ot_min < lastval < ot_max and the position is occupied.
/// Without any window mean the answer is none.
Action decide(const PositionStats& stats, const ThresholdConfig& thresholds, bool occupied);

struct PositionDecision {
  Position position = 0;
  Action action = Action::none;
};

/// Runs `decide` for every position, flips `occupancy` for each add/remove
/// and resets the per-activity statistics. Returns only non-none decisions,
/// ordered by position.
std::vector<PositionDecision> close_activity(std::span<PositionStats> stats,
                                             const ThresholdConfig& thresholds,
                                             std::vector<bool>& occupancy);

}  // namespace coldbench::detection
