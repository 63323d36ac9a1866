#pragma once

#include <string_view>
#include <vector>

#include "coldbench/core/types.hpp"

namespace coldbench::detection {

enum class LedColor { off, red, green };

std::string_view to_string(LedColor color);
LedColor led_color_from_string(std::string_view text);

/// Level-triggered per-position LEDs; the last write wins.
class LedPanel {
 public:
  explicit LedPanel(std::size_t position_count = 4) : colors_(position_count, LedColor::off) {}

  void set(Position position, LedColor color);
  LedColor get(Position position) const;
  void clear();

  std::size_t size() const { return colors_.size(); }
  const std::vector<LedColor>& colors() const { return colors_; }

  bool operator==(const LedPanel&) const = default;

 private:
  void check(Position position) const;

  std::vector<LedColor> colors_;
};

}  // namespace coldbench::detection
