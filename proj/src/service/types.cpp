#include "coldbench/service/types.hpp"

namespace coldbench::service {

using detection::EventKind;
using detection::ItemState;

std::string_view to_string(HistoryAction action) {
  switch (action) {
    case HistoryAction::add: return "add";
    case HistoryAction::remove: return "remove";
    case HistoryAction::complete: return "complete";
  }
  return "?";
}

std::optional<HistoryEntry> history_entry(const EventEnvelope& envelope) {
  const auto& e = envelope.event;
  if (!e.item) return std::nullopt;
  HistoryEntry h;
  switch (e.kind) {
    case EventKind::add: h.action = HistoryAction::add; break;
    case EventKind::remove: h.action = HistoryAction::remove; break;
    case EventKind::item_complete: h.action = HistoryAction::complete; break;
    default: return std::nullopt;
  }
  h.seq = envelope.seq;
  h.item = *e.item;
  h.position = e.position ? e.position : e.item->position;
  h.timestamp = e.timestamp;
  h.activity_id = e.activity_id;
  return h;
}

FridgeContents apply(FridgeContents c, const HistoryEntry& entry) {
  const auto& item = entry.item;
  switch (entry.action) {
    case HistoryAction::add: {
      if (!entry.position) break;
      const auto it = c.positions.find(*entry.position);
      if (it != c.positions.end() && it->second.item_id != item.item_id) {
        c.items.erase(it->second.item_id);
      }
      auto placed = item;
      placed.position = entry.position;
      c.positions[*entry.position] = placed;
      c.items[item.item_id] = placed;
      break;
    }
    case HistoryAction::complete: {
      if (!c.items.contains(item.item_id)) break;
      c.items[item.item_id] = item;
      if (item.position) {
        const auto it = c.positions.find(*item.position);
        if (it != c.positions.end() && it->second.item_id == item.item_id) it->second = item;
      }
      break;
    }
    case HistoryAction::remove: {
      c.items.erase(item.item_id);
      if (entry.position) {
        const auto it = c.positions.find(*entry.position);
        if (it != c.positions.end() && it->second.item_id == item.item_id) c.positions.erase(it);
      }
      break;
    }
  }
  return c;
}

FridgeContents fold(const std::vector<HistoryEntry>& history) {
  FridgeContents c;
  for (const auto& h : history) c = apply(std::move(c), h);
  return c;
}

}  // namespace coldbench::service
