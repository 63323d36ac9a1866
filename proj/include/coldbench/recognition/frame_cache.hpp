#pragma once

#include <cstdint>
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "coldbench/core/types.hpp"

namespace coldbench::recognition {

/// Opaque frame as the recognizers see it. `label` is the simulator's
/// ground-truth channel; real recognizers would read pixels instead.
struct FramePayload {
  std::uint64_t frame_id = 0;
  ActivityId activity_id = 0;
  std::uint64_t presentation_id = 0;
  Millis captured_at = 0;
  std::string label;
};

enum class FetchStatus { ok, expired, not_found };

struct FetchResult {
  FetchStatus status = FetchStatus::not_found;
  std::optional<FramePayload> payload;
};

/// Short-lived frame store addressed by unguessable tokens.
///
/// Non-permanent entries become unreachable `ttl` after insertion and are
/// evicted least-recently-used once `capacity` is exceeded. Promoted entries
/// never expire and do not count against the capacity. All operations are
/// atomic.
class FrameCache {
 public:
  FrameCache(std::size_t capacity = 1000, Millis ttl_ms = 60'000, std::optional<std::uint64_t> seed = {});

  std::string put(FramePayload payload, Millis now);
  /// Throws std::invalid_argument for a malformed token.
  FetchResult fetch(const std::string& token, Millis now);
  /// Makes the entry permanent. False if the token is unknown.
  bool promote(const std::string& token);

  std::size_t size() const;
  std::size_t evictions() const;

  static bool well_formed(const std::string& token);

 private:
  struct Entry {
    FramePayload payload;
    Millis expires_at;
    bool permanent;
    std::list<std::string>::iterator lru;
  };

  std::string new_token();

  mutable std::mutex mu_;
  std::size_t capacity_;
  Millis ttl_;
  Rng rng_;
  std::unordered_map<std::string, Entry> entries_;
  std::list<std::string> lru_;  // non-permanent tokens, most recent first
  std::size_t evictions_ = 0;
};

}  // namespace coldbench::recognition
