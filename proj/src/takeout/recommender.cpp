#include "coldbench/takeout/recommender.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace coldbench::takeout {

namespace {

constexpr Millis kHourMs = 3'600'000;

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

void TakeoutConfig::validate() const {
  if (!(margin > 1.0)) throw ConfigError("takeout margin must exceed 1");
  if (!(min_share > 0.0 && min_share <= 1.0)) throw ConfigError("min_share must lie in (0, 1]");
}

double DwellStats::mean_ms() const {
  if (dwell_ms.empty()) return 0.0;
  return static_cast<double>(std::accumulate(dwell_ms.begin(), dwell_ms.end(), Millis{0})) /
         static_cast<double>(dwell_ms.size());
}

int hour_of_day(Millis t) {
  const Millis h = (t / kHourMs) % 24;
  return static_cast<int>(h < 0 ? h + 24 : h);
}

TakeoutRecommender::TakeoutRecommender(TakeoutConfig config) : config_(config) { config_.validate(); }

TakeoutRecommender TakeoutRecommender::from_history(const std::vector<service::HistoryEntry>& history,
                                                    TakeoutConfig config) {
  TakeoutRecommender r(config);
  for (const auto& entry : history) r.ingest(entry);
  return r;
}

void TakeoutRecommender::ingest(const service::HistoryEntry& entry) {
  if (entry.action != service::HistoryAction::remove) return;
  on_remove(entry.item, entry.item.removed_at.value_or(entry.timestamp));
}

bool TakeoutRecommender::on_remove(const detection::ItemRecord& record, Millis now) {
  if (!record.name) {
    warnings_.push_back("removal of unnamed item " + std::to_string(record.item_id) + " skipped");
    return false;
  }
  if (!record.added_at) {
    warnings_.push_back("removal of '" + *record.name + "' without add time skipped");
    return false;
  }
  const Millis removed = record.removed_at.value_or(now);
  auto& d = dwell_[*record.name];
  d.item = *record.name;
  d.dwell_ms.push_back(removed - *record.added_at);
  auto& p = profiles_[*record.name];
  p.item = *record.name;
  ++p.buckets[static_cast<std::size_t>(hour_of_day(removed))];
  ++p.total;
  return true;
}

std::vector<Suggestion> TakeoutRecommender::expiry_alerts(const service::FridgeContents& contents, Millis now) const {
  std::vector<Suggestion> out;
  for (const auto& [pos, record] : contents.positions) {
    if (!record.name || !record.added_at) continue;
    const auto it = dwell_.find(*record.name);
    if (it == dwell_.end() || it->second.dwell_ms.size() < config_.min_history) continue;
    const double limit = config_.margin * it->second.mean_ms();
    if (static_cast<double>(now - *record.added_at) > limit) {
      out.push_back({pos, *record.name, "kept longer than usual"});
    }
  }
  return out;
}

std::vector<Suggestion> TakeoutRecommender::door_open_recommendations(const service::FridgeContents& contents,
                                                                      Millis now) const {
  const auto hour = static_cast<std::size_t>(hour_of_day(now));
  std::vector<Suggestion> out;
  for (const auto& [pos, record] : contents.positions) {
    if (!record.name) continue;
    const auto it = profiles_.find(*record.name);
    if (it == profiles_.end() || it->second.total < config_.min_history) continue;
    const double share = static_cast<double>(it->second.buckets[hour]) / static_cast<double>(it->second.total);
    if (share >= config_.min_share) {
      out.push_back({pos, *record.name, "usually taken out around " + std::to_string(hour) + ":00"});
    }
  }
  return out;
}

std::vector<Suggestion> search(const std::string& query, const service::FridgeContents& contents,
                               const std::map<std::string, std::set<std::string>>& tags) {
  const std::string q = lowercase(query);
  std::vector<Suggestion> out;
  if (q.empty()) return out;
  for (const auto& [pos, record] : contents.positions) {
    if (!record.name) continue;
    if (lowercase(*record.name).find(q) != std::string::npos) {
      out.push_back({pos, *record.name, "name"});
      continue;
    }
    const auto it = tags.find(*record.name);
    if (it == tags.end()) continue;
    for (const auto& tag : it->second) {
      if (tag.find(q) != std::string::npos) {
        out.push_back({pos, *record.name, "tag " + tag});
        break;
      }
    }
  }
  return out;
}

std::vector<detection::LedColor> led_overlay(std::size_t position_count, const std::vector<Suggestion>& red,
                                             const std::vector<Suggestion>& green) {
  std::vector<detection::LedColor> leds(position_count, detection::LedColor::off);
  for (const auto& s : green) {
    if (s.position < position_count) leds[s.position] = detection::LedColor::green;
  }
  for (const auto& s : red) {
    if (s.position < position_count) leds[s.position] = detection::LedColor::red;
  }
  return leds;
}

}  // namespace coldbench::takeout
