#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coldbench/detection/types.hpp"

namespace coldbench::eval {

/// One scripted user action.
struct GroundTruthStep {
  std::size_t index = 0;
  detection::Action action = detection::Action::none;
  /// Item added or taken out; empty for none.
  std::string item;
  std::optional<Position> position;
  /// Index of the add step that put this item in (the step itself for adds).
  std::optional<std::size_t> instance;

  bool operator==(const GroundTruthStep&) const = default;
};

/// Random state-aware script: each step picks uniformly among the action
/// kinds that are currently possible, then a uniform position and item.
/// The same item may be in the fridge more than once.
std::vector<GroundTruthStep> generate_script(std::size_t steps, const std::vector<std::string>& items,
                                             std::size_t position_count, std::uint64_t seed);

/// Throws std::invalid_argument if a step adds to an occupied position or
/// removes from an empty one, or names the wrong item or instance.
void check_script(const std::vector<GroundTruthStep>& script, std::size_t position_count);

std::string describe(const GroundTruthStep& step);

}  // namespace coldbench::eval
