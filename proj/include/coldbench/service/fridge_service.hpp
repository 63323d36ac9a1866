#pragma once

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "coldbench/service/types.hpp"

namespace coldbench::service {

struct ServiceOptions {
  /// Append-only per-fridge logs live here; nothing is persisted when unset.
  std::optional<std::filesystem::path> data_dir;
  /// Source of `emitted_at`; wall-clock epoch milliseconds by default.
  std::function<Millis()> clock;
  std::size_t position_count = 4;
  Millis default_poll_timeout_ms = 30'000;
  Millis max_poll_timeout_ms = 120'000;
  /// Seed for fridge ids; random when unset.
  std::optional<std::uint64_t> id_seed;
};

/// Per-fridge event service.
///
/// Every fridge is an independent partition: its own lock, sequence counter,
/// log and waiters. Publishing appends an envelope, folds the derived
/// history entry into a fresh immutable snapshot and wakes that fridge's
/// pollers; waiting pollers hold no lock.
class FridgeService {
 public:
  explicit FridgeService(ServiceOptions options = {});
  ~FridgeService();

  FridgeService(const FridgeService&) = delete;
  FridgeService& operator=(const FridgeService&) = delete;

  FridgeId register_fridge();
  bool exists(const FridgeId& id) const;
  std::vector<FridgeId> fridge_ids() const;

  /// All of these throw NotFound for an unknown fridge. publish throws
  /// std::invalid_argument for an add/remove without a valid position.
  Seq publish(const FridgeId& id, const detection::DetectionEvent& event);
  /// Envelopes with seq > cursor; blocks up to `timeout_ms` (clamped) when
  /// there are none yet.
  std::vector<EventEnvelope> poll(const FridgeId& id, Seq cursor, std::optional<Millis> timeout_ms = {});
  std::shared_ptr<const FridgeSnapshot> get_state(const FridgeId& id) const;
  std::vector<HistoryEntry> get_history(const FridgeId& id, std::optional<Millis> since = {},
                                        const std::optional<std::string>& item = {}) const;
  std::vector<EventEnvelope> get_log(const FridgeId& id) const;

  std::vector<detection::LedColor> leds(const FridgeId& id) const;
  void set_leds(const FridgeId& id, const std::vector<detection::LedColor>& colors);

  /// Tags are lower-cased and deduplicated; an empty list clears them.
  std::set<std::string> set_tags(const FridgeId& id, const std::string& item, const std::vector<std::string>& tags);
  std::map<std::string, std::set<std::string>> tags(const FridgeId& id) const;

  Millis now() const;
  Millis clamp_timeout(std::optional<Millis> timeout_ms) const;
  std::size_t position_count() const { return options_.position_count; }
  /// Releases all blocked polls; later polls return immediately.
  void shutdown();

 private:
  struct Fridge;

  std::shared_ptr<Fridge> fridge(const FridgeId& id) const;
  std::shared_ptr<Fridge> create(const FridgeId& id);
  void load(const std::filesystem::path& dir);
  static void append(Fridge& f, const EventEnvelope& envelope);

  ServiceOptions options_;
  mutable std::shared_mutex registry_mu_;
  std::map<FridgeId, std::shared_ptr<Fridge>> fridges_;
  std::mutex id_mu_;
  Rng id_rng_;
  std::atomic<bool> shutting_down_{false};
};

}  // namespace coldbench::service
