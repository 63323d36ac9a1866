#include "coldbench/recognition/frame_cache.hpp"

#include <random>
#include <stdexcept>

namespace coldbench::recognition {

namespace {

constexpr std::size_t kTokenLength = 32;

std::uint64_t entropy_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

}  // namespace

FrameCache::FrameCache(std::size_t capacity, Millis ttl_ms, std::optional<std::uint64_t> seed)
    : capacity_(capacity), ttl_(ttl_ms), rng_(seed ? *seed : entropy_seed()) {
  if (capacity == 0) throw std::invalid_argument("frame cache capacity must be positive");
}

bool FrameCache::well_formed(const std::string& token) {
  if (token.size() != kTokenLength) return false;
  for (const char c : token) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

std::string FrameCache::new_token() {
  static constexpr char kHex[] = "0123456789abcdef";
  while (true) {
    std::string token;
    token.reserve(kTokenLength);
    for (int half = 0; half < 2; ++half) {
      std::uint64_t bits = rng_();
      for (int i = 0; i < 16; ++i, bits >>= 4) token.push_back(kHex[bits & 0xF]);
    }
    if (!entries_.contains(token)) return token;
  }
}

std::string FrameCache::put(FramePayload payload, Millis now) {
  std::lock_guard lock(mu_);
  std::string token = new_token();
  lru_.push_front(token);
  entries_.emplace(token, Entry{std::move(payload), now + ttl_, false, lru_.begin()});
  while (lru_.size() > capacity_) {
    entries_.erase(lru_.back());
    lru_.pop_back();
    ++evictions_;
  }
  return token;
}

FetchResult FrameCache::fetch(const std::string& token, Millis now) {
  if (!well_formed(token)) throw std::invalid_argument("malformed frame token");
  std::lock_guard lock(mu_);
  const auto it = entries_.find(token);
  if (it == entries_.end()) return {FetchStatus::not_found, std::nullopt};
  Entry& entry = it->second;
  if (!entry.permanent && now >= entry.expires_at) return {FetchStatus::expired, std::nullopt};
  if (!entry.permanent) lru_.splice(lru_.begin(), lru_, entry.lru);
  return {FetchStatus::ok, entry.payload};
}

bool FrameCache::promote(const std::string& token) {
  std::lock_guard lock(mu_);
  const auto it = entries_.find(token);
  if (it == entries_.end()) return false;
  if (!it->second.permanent) {
    lru_.erase(it->second.lru);
    it->second.permanent = true;
  }
  return true;
}

std::size_t FrameCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::size_t FrameCache::evictions() const {
  std::lock_guard lock(mu_);
  return evictions_;
}

}  // namespace coldbench::recognition
