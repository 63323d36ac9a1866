#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coldbench/detection/led_panel.hpp"
#include "coldbench/detection/types.hpp"

namespace coldbench::service {

using FridgeId = std::string;
using Seq = std::uint64_t;

struct EventEnvelope {
  FridgeId fridge_id;
  Seq seq = 0;
  detection::DetectionEvent event;
  Millis emitted_at = 0;

  bool operator==(const EventEnvelope&) const = default;
};

enum class HistoryAction { add, remove, complete };

std::string_view to_string(HistoryAction action);

/// Item-level change derived from one envelope. `complete` records a
/// placeholder getting its name.
struct HistoryEntry {
  Seq seq = 0;
  HistoryAction action = HistoryAction::add;
  detection::ItemRecord item;
  std::optional<Position> position;
  Millis timestamp = 0;
  ActivityId activity_id = 0;

  bool operator==(const HistoryEntry&) const = default;
};

/// Fridge contents: the left fold of the history.
struct FridgeContents {
  std::map<Position, detection::ItemRecord> positions;
  /// Live records by id (includes records without a position).
  std::map<ItemId, detection::ItemRecord> items;

  bool operator==(const FridgeContents&) const = default;
};

/// History entry produced by an envelope, if the event changes contents.
std::optional<HistoryEntry> history_entry(const EventEnvelope& envelope);

/// Pure reducer.
FridgeContents apply(FridgeContents contents, const HistoryEntry& entry);
FridgeContents fold(const std::vector<HistoryEntry>& history);

struct FridgeSnapshot {
  FridgeId fridge_id;
  Seq head_seq = 0;
  bool door_open = false;
  ActivityId last_activity = 0;
  FridgeContents contents;
};

}  // namespace coldbench::service
