#include "coldbench/detection/types.hpp"

#include <array>
#include <utility>

namespace coldbench::detection {

namespace {

constexpr std::array<std::pair<ItemState, std::string_view>, 4> kItemStates{{
    {ItemState::pending, "pending"},
    {ItemState::placeholder, "placeholder"},
    {ItemState::complete, "complete"},
    {ItemState::removed, "removed"},
}};

constexpr std::array<std::pair<EventKind, std::string_view>, 6> kEventKinds{{
    {EventKind::add, "add"},
    {EventKind::remove, "remove"},
    {EventKind::door_open, "door_open"},
    {EventKind::door_close, "door_close"},
    {EventKind::item_complete, "item_complete"},
    {EventKind::alert, "alert"},
}};

}  // namespace

void ThresholdConfig::validate() const {
  if (!(it_min < it_max)) throw ConfigError("thresholds: it_min must be below it_max");
  if (!(ot_min < ot_max)) throw ConfigError("thresholds: ot_min must be below ot_max");
}

std::string_view to_string(ItemState state) {
  for (const auto& [value, name] : kItemStates) {
    if (value == state) return name;
  }
  return "unknown";
}

ItemState item_state_from_string(std::string_view text) {
  for (const auto& [value, name] : kItemStates) {
    if (name == text) return value;
  }
  throw std::invalid_argument("unknown item state: " + std::string(text));
}

std::string_view to_string(EventKind kind) {
  for (const auto& [value, name] : kEventKinds) {
    if (value == kind) return name;
  }
  return "unknown";
}

EventKind event_kind_from_string(std::string_view text) {
  for (const auto& [value, name] : kEventKinds) {
    if (name == text) return value;
  }
  throw std::invalid_argument("unknown event kind: " + std::string(text));
}

std::string_view to_string(Action action) {
  switch (action) {
    case Action::add:
      return "add";
    case Action::remove:
      return "remove";
    case Action::none:
      break;
  }
  return "none";
}

}  // namespace coldbench::detection
