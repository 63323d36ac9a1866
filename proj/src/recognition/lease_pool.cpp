#include "coldbench/recognition/lease_pool.hpp"

#include <algorithm>
#include <stdexcept>

namespace coldbench::recognition {

LeasePool::LeasePool(std::size_t size) : size_(size) {
  if (size == 0) throw std::invalid_argument("lease pool needs at least one worker");
  for (std::size_t i = 0; i < size; ++i) idle_.push_back(next_worker_++);
}

Lease LeasePool::grant(Millis now) {
  const std::uint32_t worker = idle_.front();
  idle_.pop_front();
  const std::uint64_t id = next_lease_++;
  outstanding_.emplace(id, worker);
  peak_ = std::max(peak_, outstanding_.size());
  return Lease{worker, id, now, false};
}

std::optional<Lease> LeasePool::try_acquire(Millis now) {
  std::lock_guard lock(mu_);
  if (next_ticket_ != serving_ || idle_.empty()) return std::nullopt;
  ++next_ticket_;
  ++serving_;
  return grant(now);
}

Lease LeasePool::acquire(Millis now) {
  std::unique_lock lock(mu_);
  const std::uint64_t ticket = next_ticket_++;
  cv_.wait(lock, [&] { return ticket == serving_ && !idle_.empty(); });
  ++serving_;
  Lease lease = grant(now);
  lock.unlock();
  cv_.notify_all();
  return lease;
}

void LeasePool::release(Lease& lease) {
  {
    std::lock_guard lock(mu_);
    const auto it = outstanding_.find(lease.lease_id);
    if (lease.released || it == outstanding_.end()) {
      throw std::logic_error("lease " + std::to_string(lease.lease_id) + " is not outstanding");
    }
    const std::uint32_t worker = it->second;
    outstanding_.erase(it);
    if (retiring_.erase(worker) == 0) idle_.push_back(worker);
    lease.released = true;
  }
  cv_.notify_all();
}

bool LeasePool::is_outstanding(const Lease& lease) const {
  std::lock_guard lock(mu_);
  return !lease.released && outstanding_.contains(lease.lease_id);
}

void LeasePool::add_worker() {
  {
    std::lock_guard lock(mu_);
    idle_.push_back(next_worker_++);
    ++size_;
  }
  cv_.notify_all();
}

bool LeasePool::remove_worker() {
  std::lock_guard lock(mu_);
  if (size_ <= 1) return false;
  --size_;
  if (!idle_.empty()) {
    idle_.pop_back();
    return true;
  }
  for (const auto& [lease, worker] : outstanding_) {
    if (!retiring_.contains(worker)) {
      retiring_.insert(worker);
      return true;
    }
  }
  return true;
}

std::size_t LeasePool::size() const {
  std::lock_guard lock(mu_);
  return size_;
}

std::size_t LeasePool::outstanding() const {
  std::lock_guard lock(mu_);
  return outstanding_.size();
}

std::size_t LeasePool::peak_outstanding() const {
  std::lock_guard lock(mu_);
  return peak_;
}

std::size_t LeasePool::waiting() const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(next_ticket_ - serving_);
}

}  // namespace coldbench::recognition
