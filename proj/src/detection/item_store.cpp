#include "coldbench/detection/item_store.hpp"

#include <algorithm>
#include <stdexcept>

namespace coldbench::detection {

ItemStore::ItemStore(std::size_t position_count, Millis dedup_window)
    : dedup_window_(dedup_window), occupants_(position_count) {}

ItemRecord& ItemStore::create(ActivityId activity, Millis now) {
  ItemRecord record;
  record.item_id = next_id_++;
  record.activity_id = activity;
  record.added_at = now;
  return records_.emplace(record.item_id, std::move(record)).first->second;
}

void ItemStore::check_position(Position position) const {
  if (position >= occupants_.size()) {
    throw std::out_of_range("position " + std::to_string(position) + " out of range");
  }
}

Transition ItemStore::on_recognition(const std::string& name, ActivityId activity, Millis now) {
  const auto key = std::make_pair(activity, name);
  if (auto it = marks_.find(key); it != marks_.end() && now - it->second.last_seen <= dedup_window_) {
    it->second.last_seen = now;
    return {Transition::Kind::collapsed, records_.at(it->second.item), std::nullopt};
  }

  // Most recent placeholder positioned during the same activity.
  for (auto it = placeholders_.rbegin(); it != placeholders_.rend(); ++it) {
    ItemRecord& record = records_.at(*it);
    if (record.activity_id != activity) continue;
    record.name = name;
    record.state = ItemState::complete;
    marks_[key] = {now, record.item_id};
    placeholders_.erase(std::next(it).base());
    return {Transition::Kind::placeholder_filled, record, std::nullopt};
  }

  ItemRecord& record = create(activity, now);
  record.name = name;
  record.state = ItemState::pending;
  pending_.push_back(record.item_id);
  marks_[key] = {now, record.item_id};
  return {Transition::Kind::pending_created, record, std::nullopt};
}

Transition ItemStore::on_add(Position position, ActivityId activity, Millis now) {
  check_position(position);

  std::optional<ItemRecord> displaced;
  if (const auto current = occupants_[position]) {
    ItemRecord& old = records_.at(*current);
    old.state = ItemState::removed;
    old.removed_at = now;
    old.removal_reason = "displaced";
    std::erase(placeholders_, old.item_id);
    occupants_[position].reset();
    displaced = old;
  }

  for (auto it = pending_.rbegin(); it != pending_.rend(); ++it) {
    ItemRecord& record = records_.at(*it);
    if (record.activity_id > activity) continue;
    record.position = position;
    record.state = ItemState::complete;
    record.activity_id = activity;
    record.added_at = now;
    occupants_[position] = record.item_id;
    pending_.erase(std::next(it).base());
    return {Transition::Kind::pending_attached, record, displaced};
  }

  ItemRecord& record = create(activity, now);
  record.position = position;
  record.state = ItemState::placeholder;
  occupants_[position] = record.item_id;
  placeholders_.push_back(record.item_id);
  return {Transition::Kind::placeholder_created, record, displaced};
}

Transition ItemStore::on_remove(Position position, Millis now) {
  check_position(position);
  const auto current = occupants_[position];
  if (!current) {
    throw std::logic_error("remove at unoccupied position " + std::to_string(position));
  }
  ItemRecord& record = records_.at(*current);
  record.state = ItemState::removed;
  record.removed_at = now;
  occupants_[position].reset();
  std::erase(placeholders_, record.item_id);
  return {Transition::Kind::removed, record, std::nullopt};
}

std::vector<ItemRecord> ItemStore::on_activity_closed(ActivityId closed) {
  std::vector<ItemRecord> expired;
  std::erase_if(pending_, [&](ItemId id) {
    ItemRecord& record = records_.at(id);
    if (record.activity_id >= closed) return false;
    record.state = ItemState::removed;
    record.removal_reason = "expired";
    expired.push_back(record);
    return true;
  });
  std::erase_if(placeholders_, [&](ItemId id) { return records_.at(id).activity_id < closed; });
  std::erase_if(marks_, [&](const auto& entry) { return entry.first.first < closed; });
  return expired;
}

const ItemRecord* ItemStore::occupant(Position position) const {
  check_position(position);
  const auto id = occupants_[position];
  return id ? &records_.at(*id) : nullptr;
}

const ItemRecord* ItemStore::find(ItemId id) const {
  const auto it = records_.find(id);
  return it == records_.end() ? nullptr : &it->second;
}

std::vector<ItemRecord> ItemStore::live_records() const {
  std::vector<ItemRecord> out;
  for (const auto& [id, record] : records_) {
    if (record.state != ItemState::removed) out.push_back(record);
  }
  return out;
}

}  // namespace coldbench::detection
