#include "coldbench/eval/script.hpp"

#include <stdexcept>

namespace coldbench::eval {

using detection::Action;

namespace {

struct Slot {
  std::string item;
  std::size_t instance;
};

}  // namespace

std::vector<GroundTruthStep> generate_script(std::size_t steps, const std::vector<std::string>& items,
                                             std::size_t position_count, std::uint64_t seed) {
  if (steps == 0) throw std::invalid_argument("script needs at least one step");
  if (position_count == 0) throw std::invalid_argument("script needs at least one position");
  if (items.empty()) throw ConfigError("cannot generate adds from an empty item pool");

  Rng rng(seed);
  std::vector<std::optional<Slot>> slots(position_count);
  std::vector<GroundTruthStep> script;
  script.reserve(steps);

  for (std::size_t i = 0; i < steps; ++i) {
    std::vector<Position> free, used;
    for (Position p = 0; p < position_count; ++p) (slots[p] ? used : free).push_back(p);

    std::vector<Action> options{Action::none};
    if (!free.empty()) options.push_back(Action::add);
    if (!used.empty()) options.push_back(Action::remove);

    GroundTruthStep step;
    step.index = i;
    step.action = options[uniform_index(rng, options.size())];
    if (step.action == Action::add) {
      const Position p = free[uniform_index(rng, free.size())];
      step.item = items[uniform_index(rng, items.size())];
      step.position = p;
      step.instance = i;
      slots[p] = Slot{step.item, i};
    } else if (step.action == Action::remove) {
      const Position p = used[uniform_index(rng, used.size())];
      step.item = slots[p]->item;
      step.position = p;
      step.instance = slots[p]->instance;
      slots[p].reset();
    }
    script.push_back(std::move(step));
  }
  return script;
}

void check_script(const std::vector<GroundTruthStep>& script, std::size_t position_count) {
  std::vector<std::optional<Slot>> slots(position_count);
  for (const auto& step : script) {
    if (step.action == Action::none) continue;
    if (!step.position || *step.position >= position_count) {
      throw std::invalid_argument("step " + std::to_string(step.index) + ": bad position");
    }
    auto& slot = slots[*step.position];
    if (step.action == Action::add) {
      if (slot) throw std::invalid_argument("step " + std::to_string(step.index) + ": position occupied");
      slot = Slot{step.item, step.index};
    } else {
      if (!slot) throw std::invalid_argument("step " + std::to_string(step.index) + ": position empty");
      if (slot->item != step.item || step.instance != slot->instance) {
        throw std::invalid_argument("step " + std::to_string(step.index) + ": removes the wrong item");
      }
      slot.reset();
    }
  }
}

std::string describe(const GroundTruthStep& step) {
  switch (step.action) {
    case Action::add:
      return "add(" + step.item + "," + std::to_string(*step.position) + ")";
    case Action::remove:
      return "remove(" + step.item + "," + std::to_string(*step.position) + ")";
    case Action::none:
      break;
  }
  return "none";
}

}  // namespace coldbench::eval
