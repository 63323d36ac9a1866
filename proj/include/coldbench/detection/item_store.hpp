#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coldbench/detection/types.hpp"

namespace coldbench::detection {

/// What a single correlation step did to the store.
struct Transition {
  enum class Kind {
    pending_created,      // recognition with no placeholder to fill
    collapsed,            // duplicate recognition folded into an existing record
    placeholder_filled,   // recognition named a positioned placeholder
    pending_attached,     // position add picked up the last pending item
    placeholder_created,  // position add without a pending item
    removed,
  };
  Kind kind;
  ItemRecord record;
  /// Set when an add superseded the previous occupant of the position.
  std::optional<ItemRecord> displaced;
};

/// Correlates asynchronous recognition results with position events.
///
/// Either side may arrive first. A recognition creates a pending record
/// (no position) unless a placeholder is waiting for a name; a position add
/// attaches the most recent pending record or creates a placeholder.
/// Recognitions of the same name inside one activity collapse into one record
/// while consecutive hits are at most `dedup_window` apart.
class ItemStore {
 public:
  explicit ItemStore(std::size_t position_count, Millis dedup_window = 10'000);

  Transition on_recognition(const std::string& name, ActivityId activity, Millis now);
  Transition on_add(Position position, ActivityId activity, Millis now);
  /// Throws std::logic_error when nothing occupies `position`.
  Transition on_remove(Position position, Millis now);

  /// Pending records older than `closed` expire and placeholders older than
  /// `closed` stop accepting names.
  std::vector<ItemRecord> on_activity_closed(ActivityId closed);

  const ItemRecord* occupant(Position position) const;
  const ItemRecord* find(ItemId id) const;
  /// All records ever created, by id.
  const std::map<ItemId, ItemRecord>& records() const { return records_; }
  std::vector<ItemRecord> live_records() const;

  std::size_t position_count() const { return occupants_.size(); }
  Millis dedup_window() const { return dedup_window_; }

 private:
  struct RecognitionMark {
    Millis last_seen;
    ItemId item;
  };

  ItemRecord& create(ActivityId activity, Millis now);
  void check_position(Position position) const;

  Millis dedup_window_;
  ItemId next_id_ = 1;
  std::map<ItemId, ItemRecord> records_;
  std::vector<std::optional<ItemId>> occupants_;
  std::vector<ItemId> pending_;        // creation order
  std::vector<ItemId> placeholders_;   // still accepting names, creation order
  std::map<std::pair<ActivityId, std::string>, RecognitionMark> marks_;
};

}  // namespace coldbench::detection
