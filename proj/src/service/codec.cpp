#include "coldbench/service/codec.hpp"

using nlohmann::json;

namespace coldbench::detection {

void to_json(json& j, const ItemRecord& r) {
  j = json{{"item_id", r.item_id}, {"state", to_string(r.state)}, {"activity_id", r.activity_id}};
  j["name"] = r.name ? json(*r.name) : json(nullptr);
  j["position"] = r.position ? json(*r.position) : json(nullptr);
  j["added_at"] = r.added_at ? json(*r.added_at) : json(nullptr);
  j["removed_at"] = r.removed_at ? json(*r.removed_at) : json(nullptr);
  if (!r.removal_reason.empty()) j["removal_reason"] = r.removal_reason;
}

namespace {

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

void from_json(const json& j, ItemRecord& r) {
  r = ItemRecord{};
  r.item_id = j.at("item_id").get<ItemId>();
  r.name = optional_field<std::string>(j, "name");
  r.position = optional_field<Position>(j, "position");
  r.state = item_state_from_string(j.value("state", std::string("complete")));
  r.added_at = optional_field<Millis>(j, "added_at");
  r.removed_at = optional_field<Millis>(j, "removed_at");
  r.activity_id = j.value("activity_id", ActivityId{0});
  r.removal_reason = j.value("removal_reason", std::string());
}

void to_json(json& j, const DetectionEvent& e) {
  j = json{{"kind", to_string(e.kind)}, {"timestamp", e.timestamp}, {"activity_id", e.activity_id}};
  j["position"] = e.position ? json(*e.position) : json(nullptr);
  if (e.item) j["item"] = *e.item;
}

void from_json(const json& j, DetectionEvent& e) {
  e = DetectionEvent{};
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  e.position = optional_field<Position>(j, "position");
  if (j.contains("item") && !j.at("item").is_null()) e.item = j.at("item").get<ItemRecord>();
  e.timestamp = j.value("timestamp", Millis{0});
  e.activity_id = j.value("activity_id", ActivityId{0});
}

}  // namespace coldbench::detection

namespace coldbench::service {

void to_json(json& j, const EventEnvelope& e) {
  j = e.event;
  j["fridge_id"] = e.fridge_id;
  j["seq"] = e.seq;
  j["emitted_at"] = e.emitted_at;
}

void from_json(const json& j, EventEnvelope& e) {
  e.event = j.get<detection::DetectionEvent>();
  e.fridge_id = j.at("fridge_id").get<std::string>();
  e.seq = j.at("seq").get<Seq>();
  e.emitted_at = j.value("emitted_at", Millis{0});
}

void to_json(json& j, const HistoryEntry& h) {
  j = json{{"seq", h.seq},
           {"action", to_string(h.action)},
           {"item", h.item},
           {"timestamp", h.timestamp},
           {"activity_id", h.activity_id}};
  j["position"] = h.position ? json(*h.position) : json(nullptr);
}

void to_json(json& j, const FridgeSnapshot& s) {
  json positions = json::object();
  for (const auto& [pos, record] : s.contents.positions) positions[std::to_string(pos)] = record;
  json items = json::array();
  for (const auto& [id, record] : s.contents.items) items.push_back(record);
  j = json{{"fridge_id", s.fridge_id}, {"seq", s.head_seq},          {"door_open", s.door_open},
           {"activity_id", s.last_activity}, {"positions", positions}, {"items", items}};
}

}  // namespace coldbench::service
