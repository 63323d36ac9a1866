#pragma once

#include <stdexcept>

#include "coldbench/core/types.hpp"

namespace coldbench::sim {

/// Manually advanced millisecond clock. Never moves backwards.
class VirtualClock {
 public:
  explicit VirtualClock(Millis start = 0) : now_(start) {}

  Millis now() const { return now_; }

  void advance(Millis dt) {
    if (dt < 0) throw std::invalid_argument("virtual clock cannot move backwards");
    now_ += dt;
  }

  void advance_to(Millis t) { advance(t - now_); }

 private:
  Millis now_;
};

}  // namespace coldbench::sim
