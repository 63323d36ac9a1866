#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "coldbench/core/types.hpp"

namespace coldbench::recognition {

struct Lease {
  std::uint32_t worker_id = 0;
  std::uint64_t lease_id = 0;
  Millis acquired_at = 0;
  bool released = false;
};

/// Bounded pool of recognizer workers handed out by lease.
///
/// Thread-safe. Blocking acquisitions are served strictly first-come
/// first-served; `try_acquire` never overtakes a blocked caller. Workers may
/// be added or retired while leases are outstanding.
class LeasePool {
 public:
  explicit LeasePool(std::size_t size);

  std::optional<Lease> try_acquire(Millis now);
  Lease acquire(Millis now);

  /// Returns the worker to the pool and marks `lease` released. Throws
  /// std::logic_error for a lease that is unknown or already released.
  void release(Lease& lease);
  bool is_outstanding(const Lease& lease) const;

  void add_worker();
  /// Retires one worker (an idle one if possible, otherwise the next one to
  /// be released). Returns false when the pool has a single worker left.
  bool remove_worker();

  std::size_t size() const;
  std::size_t outstanding() const;
  std::size_t peak_outstanding() const;
  std::size_t waiting() const;

 private:
  Lease grant(Millis now);

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::uint32_t> idle_;
  std::map<std::uint64_t, std::uint32_t> outstanding_;
  std::set<std::uint32_t> retiring_;
  std::size_t size_;
  std::size_t peak_ = 0;
  std::uint32_t next_worker_ = 0;
  std::uint64_t next_lease_ = 1;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t serving_ = 0;
};

}  // namespace coldbench::recognition
