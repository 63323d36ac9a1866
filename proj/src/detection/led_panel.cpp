#include "coldbench/detection/led_panel.hpp"

#include <stdexcept>
#include <string>

namespace coldbench::detection {

std::string_view to_string(LedColor color) {
  switch (color) {
    case LedColor::red:
      return "red";
    case LedColor::green:
      return "green";
    case LedColor::off:
      break;
  }
  return "off";
}

LedColor led_color_from_string(std::string_view text) {
  if (text == "off") return LedColor::off;
  if (text == "red") return LedColor::red;
  if (text == "green") return LedColor::green;
  throw std::invalid_argument("unknown LED color: " + std::string(text));
}

void LedPanel::check(Position position) const {
  if (position >= colors_.size()) {
    throw std::out_of_range("LED position " + std::to_string(position) + " out of range");
  }
}

void LedPanel::set(Position position, LedColor color) {
  check(position);
  colors_[position] = color;
}

LedColor LedPanel::get(Position position) const {
  check(position);
  return colors_[position];
}

void LedPanel::clear() {
  for (auto& color : colors_) color = LedColor::off;
}

}  // namespace coldbench::detection
