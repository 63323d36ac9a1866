#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coldbench/detection/trace.hpp"
#include "coldbench/sim/fridge_sim.hpp"

namespace coldbench::sim {

// Script file: one command per line
//   open | close | place <name> <pos> | remove <pos> | wait <ms> | occlude <pos> <ms>
// Item names may contain spaces; the position is the last field of `place`.

struct OpenDoor {};
struct CloseDoor {};
struct Place {
  std::string item;
  Position position = 0;
};
struct Remove {
  Position position = 0;
};
struct Wait {
  Millis ms = 0;
};
struct Occlude {
  Position position = 0;
  Millis ms = 0;
};

using SimCommand = std::variant<OpenDoor, CloseDoor, Place, Remove, Wait, Occlude>;

class ScriptError : public std::runtime_error {
 public:
  ScriptError(std::size_t step, const std::string& message);
  /// 1-based index of the offending command.
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

std::vector<SimCommand> parse_script(std::string_view text);
std::string format_command(const SimCommand& command);

const ItemProfile& find_item(const std::vector<ItemProfile>& catalog, std::string_view name);

struct ScriptRun {
  std::vector<detection::TraceRecord> trace;
  /// Door-open duration of every completed activity, in order.
  std::vector<Millis> activity_durations;
};

/// Executes `commands` against `sim`. Readings and door events become trace
/// records; camera frames are dropped. Throws ScriptError naming the step on
/// any occupancy or door-state violation.
ScriptRun run_script(FridgeSim& sim, const std::vector<SimCommand>& commands,
                     const std::vector<ItemProfile>& catalog);

}  // namespace coldbench::sim
