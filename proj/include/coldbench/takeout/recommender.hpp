#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coldbench/detection/led_panel.hpp"
#include "coldbench/service/types.hpp"

namespace coldbench::takeout {

struct TakeoutConfig {
  /// Alert once the current dwell exceeds margin x mean dwell.
  double margin = 1.5;
  /// Removals needed before an item is alerted on or recommended.
  std::size_t min_history = 3;
  /// Share of an item's removals that must fall in the current hour.
  double min_share = 0.5;

  void validate() const;
};

struct DwellStats {
  std::string item;
  std::vector<Millis> dwell_ms;

  double mean_ms() const;
};

struct TimeOfDayProfile {
  std::string item;
  std::array<std::size_t, 24> buckets{};
  std::size_t total = 0;
};

struct Suggestion {
  Position position = 0;
  std::string item;
  std::string reason;

  bool operator==(const Suggestion&) const = default;
};

/// UTC hour of an epoch-millisecond timestamp.
int hour_of_day(Millis t);

/// Learns dwell times and removal hours from remove events and derives
/// expiry alerts, time-of-day recommendations and search hits. Everything
/// is a function of the ingested history, `now` and the configuration.
class TakeoutRecommender {
 public:
  explicit TakeoutRecommender(TakeoutConfig config = {});

  static TakeoutRecommender from_history(const std::vector<service::HistoryEntry>& history,
                                         TakeoutConfig config = {});

  /// Records one removal. Returns false (and keeps a warning) when the record
  /// has no add time.
  bool on_remove(const detection::ItemRecord& record, Millis now);
  void ingest(const service::HistoryEntry& entry);

  std::vector<Suggestion> expiry_alerts(const service::FridgeContents& contents, Millis now) const;
  std::vector<Suggestion> door_open_recommendations(const service::FridgeContents& contents, Millis now) const;

  const std::map<std::string, DwellStats>& dwell() const { return dwell_; }
  const std::map<std::string, TimeOfDayProfile>& profiles() const { return profiles_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const TakeoutConfig& config() const { return config_; }

 private:
  TakeoutConfig config_;
  std::map<std::string, DwellStats> dwell_;
  std::map<std::string, TimeOfDayProfile> profiles_;
  std::vector<std::string> warnings_;
};

/// Case-insensitive substring match of `query` against stocked item names
/// and their tags.
std::vector<Suggestion> search(const std::string& query, const service::FridgeContents& contents,
                               const std::map<std::string, std::set<std::string>>& tags);

/// Red for alerts, green for suggestions; red wins on the same position.
std::vector<detection::LedColor> led_overlay(std::size_t position_count, const std::vector<Suggestion>& red,
                                             const std::vector<Suggestion>& green);

}  // namespace coldbench::takeout
