#include "coldbench/detection/engine.hpp"

#include <stdexcept>

namespace coldbench::detection {

DetectionEngine::DetectionEngine(EngineConfig config)
    : config_(config),
      stats_(config.position_count, PositionStats(config.window_size)),
      occupancy_(config.position_count, false),
      items_(config.position_count, config.dedup_window_ms),
      leds_(config.position_count) {
  config_.thresholds.validate();
}

std::vector<DetectionEvent> DetectionEngine::door_open(Millis now) {
  if (door_is_open()) return {};
  activity_ = ActivityPeriod{next_activity_++, now, std::nullopt};
  for (auto& stats : stats_) stats.reset_activity();
  return {DetectionEvent{EventKind::door_open, std::nullopt, std::nullopt, now, activity_->activity_id}};
}

std::vector<DetectionEvent> DetectionEngine::door_close(Millis now) {
  if (!door_is_open()) return {};
  activity_->closed_at = now;
  const ActivityId activity = activity_->activity_id;

  std::vector<DetectionEvent> events;
  events.push_back({EventKind::door_close, std::nullopt, std::nullopt, now, activity});

  for (const auto& decision : close_activity(stats_, config_.thresholds, occupancy_)) {
    if (decision.action == Action::add) {
      auto transition = items_.on_add(decision.position, activity, now);
      events.push_back({EventKind::add, decision.position, transition.record, now, activity});
    } else {
      auto transition = items_.on_remove(decision.position, now);
      events.push_back({EventKind::remove, decision.position, transition.record, now, activity});
    }
  }
  items_.on_activity_closed(activity);
  return events;
}

void DetectionEngine::reading(const SensorReading& reading) {
  if (reading.position >= stats_.size()) {
    throw std::out_of_range("reading for unknown position " + std::to_string(reading.position));
  }
  stats_[reading.position].ingest(reading.value, door_is_open());
}

std::vector<DetectionEvent> DetectionEngine::recognized(const std::string& name, ActivityId activity,
                                                        Millis now) {
  auto transition = items_.on_recognition(name, activity, now);
  if (transition.kind != Transition::Kind::placeholder_filled) return {};
  return {DetectionEvent{EventKind::item_complete, transition.record.position, transition.record, now,
                         activity}};
}

std::vector<DetectionEvent> DetectionEngine::apply(const TraceRecord& record) {
  return std::visit(
      [&](const auto& body) -> std::vector<DetectionEvent> {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, DoorOpened>) {
          return door_open(record.timestamp);
        } else if constexpr (std::is_same_v<T, DoorClosed>) {
          return door_close(record.timestamp);
        } else if constexpr (std::is_same_v<T, Reading>) {
          reading({body.position, body.value, record.timestamp});
          return {};
        } else {
          return recognized(body.name, body.activity.value_or(current_activity()), record.timestamp);
        }
      },
      record.body);
}

std::vector<DetectionEvent> replay(const std::vector<TraceRecord>& trace, const EngineConfig& config) {
  DetectionEngine engine(config);
  std::vector<DetectionEvent> events;
  for (const auto& record : trace) {
    auto out = engine.apply(record);
    events.insert(events.end(), out.begin(), out.end());
  }
  return events;
}

}  // namespace coldbench::detection
