#include "coldbench/detection/position_filter.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace coldbench::detection {

PositionStats::PositionStats(std::size_t window_size)
    : window_size_(window_size), ring_(window_size, 0.0) {
  if (window_size == 0) throw std::invalid_argument("window size must be positive");
}

void PositionStats::ingest(double value, bool activity_open) {
  ring_[head_] = value;
  head_ = (head_ + 1) % window_size_;
  filled_ = std::min(filled_ + 1, window_size_);
  if (!activity_open) return;

  ++readings_in_activity_;
  if (readings_in_activity_ < window_size_) return;

  const double mean = *window_mean();
  min_ = min_ ? std::min(*min_, mean) : mean;
  max_ = max_ ? std::max(*max_, mean) : mean;
  last_ = mean;
}

void PositionStats::reset_activity() {
  readings_in_activity_ = 0;
  min_.reset();
  max_.reset();
  last_.reset();
}

std::optional<double> PositionStats::window_mean() const {
  if (filled_ < window_size_) return std::nullopt;
  return std::accumulate(ring_.begin(), ring_.end(), 0.0) / static_cast<double>(window_size_);
}

std::vector<double> PositionStats::window() const {
  std::vector<double> out;
  out.reserve(filled_);
  const std::size_t start = (head_ + window_size_ - filled_) % window_size_;
  for (std::size_t i = 0; i < filled_; ++i) out.push_back(ring_[(start + i) % window_size_]);
  return out;
}

PositionStats ingest_reading(PositionStats stats, double value, bool activity_open) {
  stats.ingest(value, activity_open);
  return stats;
}

Action decide(const PositionStats& stats, const ThresholdConfig& thresholds, bool occupied) {
  if (!stats.has_window_mean()) return Action::none;
  const double minval = *stats.minval();
  const double maxval = *stats.maxval();
  const double lastval = *stats.lastval();

  if ((minval < thresholds.it_min || maxval > thresholds.it_max) && !occupied) {
    return Action::add;
  }
  if (thresholds.ot_min < lastval && lastval < thresholds.ot_max && occupied) {
    return Action::remove;
  }
  return Action::none;
}

std::vector<PositionDecision> close_activity(std::span<PositionStats> stats,
                                             const ThresholdConfig& thresholds,
                                             std::vector<bool>& occupancy) {
  if (occupancy.size() != stats.size()) {
    throw std::invalid_argument("occupancy map does not match position count");
  }
  std::vector<PositionDecision> decisions;
  for (Position pos = 0; pos < stats.size(); ++pos) {
    const Action action = decide(stats[pos], thresholds, occupancy[pos]);
    if (action == Action::add) occupancy[pos] = true;
    if (action == Action::remove) occupancy[pos] = false;
    if (action != Action::none) decisions.push_back({pos, action});
    stats[pos].reset_activity();
  }
  return decisions;
}

}  // namespace coldbench::detection
