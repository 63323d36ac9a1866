#pragma once

#include <optional>
#include <vector>

#include "coldbench/detection/item_store.hpp"
#include "coldbench/detection/led_panel.hpp"
#include "coldbench/detection/position_filter.hpp"
#include "coldbench/detection/trace.hpp"
#include "coldbench/detection/types.hpp"

namespace coldbench::detection {

struct EngineConfig {
  std::size_t position_count = 4;
  std::size_t window_size = 5;
  ThresholdConfig thresholds;
  Millis dedup_window_ms = 10'000;
};

/// Per-fridge detection engine. Inputs must arrive through one ordered
/// stream; the engine is not thread-safe.
///
/// Decisions are taken once per position when the door closes. Readings
/// between activities only advance the raw windows.
class DetectionEngine {
 public:
  explicit DetectionEngine(EngineConfig config = {});

  std::vector<DetectionEvent> door_open(Millis now);
  std::vector<DetectionEvent> door_close(Millis now);
  /// Throws std::out_of_range for an unknown position.
  void reading(const SensorReading& reading);
  std::vector<DetectionEvent> recognized(const std::string& name, ActivityId activity, Millis now);

  /// Dispatches one replay record. Recognitions without an explicit activity
  /// are attributed to the current (or most recent) activity.
  std::vector<DetectionEvent> apply(const TraceRecord& record);

  bool door_is_open() const { return activity_ && activity_->open(); }
  /// Current or most recent activity; 0 before the first door opening.
  ActivityId current_activity() const { return activity_ ? activity_->activity_id : 0; }
  const std::optional<ActivityPeriod>& activity() const { return activity_; }

  const EngineConfig& config() const { return config_; }
  const std::vector<PositionStats>& stats() const { return stats_; }
  const std::vector<bool>& occupancy() const { return occupancy_; }
  const ItemStore& items() const { return items_; }
  LedPanel& leds() { return leds_; }
  const LedPanel& leds() const { return leds_; }

 private:
  EngineConfig config_;
  std::vector<PositionStats> stats_;
  std::vector<bool> occupancy_;
  ItemStore items_;
  LedPanel leds_;
  std::optional<ActivityPeriod> activity_;
  ActivityId next_activity_ = 1;
};

/// Replays a whole trace through a fresh engine.
std::vector<DetectionEvent> replay(const std::vector<TraceRecord>& trace, const EngineConfig& config);

}  // namespace coldbench::detection
