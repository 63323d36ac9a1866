#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "coldbench/core/types.hpp"

namespace coldbench::detection {

struct SensorReading {
  Position position = 0;
  double value = 0.0;
  Millis timestamp = 0;
};

/// Input thresholds fire adds (min for reflective, max for non-reflective
/// items); the output band (ot_min, ot_max) on the last window mean fires
/// removes.
struct ThresholdConfig {
  double it_min = 250.0;
  double it_max = 550.0;
  double ot_min = 250.0;
  double ot_max = 520.0;

  /// Throws ConfigError when the ordering invariants are violated.
  void validate() const;
};

struct ActivityPeriod {
  ActivityId activity_id = 0;
  Millis opened_at = 0;
  std::optional<Millis> closed_at;

  bool open() const { return !closed_at.has_value(); }
};

enum class ItemState { pending, placeholder, complete, removed };

std::string_view to_string(ItemState state);
ItemState item_state_from_string(std::string_view text);

struct ItemRecord {
  ItemId item_id = 0;
  std::optional<std::string> name;
  std::optional<Position> position;
  ItemState state = ItemState::pending;
  std::optional<Millis> added_at;
  std::optional<Millis> removed_at;
  /// Activity in which the record got its position (or, while pending, the
  /// activity of the recognition that created it).
  ActivityId activity_id = 0;
  /// Empty for ordinary removals; "displaced" or "expired" otherwise.
  std::string removal_reason;

  bool operator==(const ItemRecord&) const = default;
};

enum class EventKind { add, remove, door_open, door_close, item_complete, alert };

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view text);

struct DetectionEvent {
  EventKind kind = EventKind::door_open;
  std::optional<Position> position;
  std::optional<ItemRecord> item;
  Millis timestamp = 0;
  ActivityId activity_id = 0;

  bool operator==(const DetectionEvent&) const = default;
};

enum class Action { none, add, remove };

std::string_view to_string(Action action);

}  // namespace coldbench::detection
