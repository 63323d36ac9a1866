#pragma once

#include <json.hpp>

#include "coldbench/detection/types.hpp"
#include "coldbench/service/types.hpp"

// Wire format. Timestamps are integer milliseconds; absent optionals are
// written as null and may be omitted on input.
namespace coldbench::detection {

void to_json(nlohmann::json& j, const ItemRecord& r);
void from_json(const nlohmann::json& j, ItemRecord& r);
void to_json(nlohmann::json& j, const DetectionEvent& e);
void from_json(const nlohmann::json& j, DetectionEvent& e);

}  // namespace coldbench::detection

namespace coldbench::service {

void to_json(nlohmann::json& j, const EventEnvelope& e);
void from_json(const nlohmann::json& j, EventEnvelope& e);
void to_json(nlohmann::json& j, const HistoryEntry& h);
void to_json(nlohmann::json& j, const FridgeSnapshot& s);

}  // namespace coldbench::service
