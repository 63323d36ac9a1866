#include "coldbench/sim/script.hpp"

#include <charconv>
#include <optional>

namespace coldbench::sim {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string_view::npos) break;
    line.remove_prefix(start);
    const auto end = line.find_first_of(" \t\r");
    out.push_back(line.substr(0, end));
    if (end == std::string_view::npos) break;
    line.remove_prefix(end);
  }
  return out;
}

template <typename T>
std::optional<T> number(std::string_view token) {
  T value{};
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

ScriptError::ScriptError(std::size_t step, const std::string& message)
    : std::runtime_error("script step " + std::to_string(step) + ": " + message), step_(step) {}

std::vector<SimCommand> parse_script(std::string_view text) {
  std::vector<SimCommand> commands;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    const auto tokens = split(line);
    if (tokens.empty()) continue;
    const auto verb = tokens.front();
    const auto fail = [&](const std::string& why) { return ScriptError(commands.size() + 1, why); };

    if (verb == "open" && tokens.size() == 1) {
      commands.emplace_back(OpenDoor{});
    } else if (verb == "close" && tokens.size() == 1) {
      commands.emplace_back(CloseDoor{});
    } else if (verb == "place" && tokens.size() >= 3) {
      const auto pos = number<Position>(tokens.back());
      if (!pos) throw fail("place needs a numeric position");
      std::string name(tokens[1]);
      for (std::size_t i = 2; i + 1 < tokens.size(); ++i) name += ' ' + std::string(tokens[i]);
      commands.emplace_back(Place{std::move(name), *pos});
    } else if (verb == "remove" && tokens.size() == 2) {
      const auto pos = number<Position>(tokens[1]);
      if (!pos) throw fail("remove needs a numeric position");
      commands.emplace_back(Remove{*pos});
    } else if (verb == "wait" && tokens.size() == 2) {
      const auto ms = number<Millis>(tokens[1]);
      if (!ms || *ms < 0) throw fail("wait needs a non-negative duration");
      commands.emplace_back(Wait{*ms});
    } else if (verb == "occlude" && tokens.size() == 3) {
      const auto pos = number<Position>(tokens[1]);
      const auto ms = number<Millis>(tokens[2]);
      if (!pos || !ms || *ms <= 0) throw fail("occlude needs <pos> <ms>");
      commands.emplace_back(Occlude{*pos, *ms});
    } else {
      throw fail("cannot parse '" + std::string(line) + "' (line " + std::to_string(line_no) + ")");
    }
  }
  return commands;
}

std::string format_command(const SimCommand& command) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, OpenDoor>) {
          return "open";
        } else if constexpr (std::is_same_v<T, CloseDoor>) {
          return "close";
        } else if constexpr (std::is_same_v<T, Place>) {
          return "place " + c.item + ' ' + std::to_string(c.position);
        } else if constexpr (std::is_same_v<T, Remove>) {
          return "remove " + std::to_string(c.position);
        } else if constexpr (std::is_same_v<T, Wait>) {
          return "wait " + std::to_string(c.ms);
        } else {
          return "occlude " + std::to_string(c.position) + ' ' + std::to_string(c.ms);
        }
      },
      command);
}

const ItemProfile& find_item(const std::vector<ItemProfile>& catalog, std::string_view name) {
  for (const auto& item : catalog) {
    if (item.name == name) return item;
  }
  throw std::out_of_range("unknown item '" + std::string(name) + "'");
}

ScriptRun run_script(FridgeSim& sim, const std::vector<SimCommand>& commands,
                     const std::vector<ItemProfile>& catalog) {
  ScriptRun run;
  Millis opened_at = 0;

  const auto record_outputs = [&](const std::vector<SimOutput>& outputs) {
    for (const auto& output : outputs) {
      if (const auto* reading = std::get_if<detection::SensorReading>(&output)) {
        run.trace.push_back({reading->timestamp, detection::Reading{reading->position, reading->value}});
      }
    }
  };

  for (std::size_t i = 0; i < commands.size(); ++i) {
    const std::size_t step = i + 1;
    try {
      std::visit(
          [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, OpenDoor>) {
              const auto event = sim.open_door();
              opened_at = event.timestamp;
              run.trace.push_back({event.timestamp, detection::DoorOpened{}});
            } else if constexpr (std::is_same_v<T, CloseDoor>) {
              const auto event = sim.close_door();
              run.activity_durations.push_back(event.timestamp - opened_at);
              run.trace.push_back({event.timestamp, detection::DoorClosed{}});
            } else if constexpr (std::is_same_v<T, Place>) {
              sim.place(find_item(catalog, c.item), c.position);
            } else if constexpr (std::is_same_v<T, Remove>) {
              sim.remove(c.position);
            } else if constexpr (std::is_same_v<T, Wait>) {
              if (c.ms > 0) record_outputs(sim.step(c.ms));
            } else {
              sim.occlude(c.position, c.ms);
            }
          },
          commands[i]);
    } catch (const ScriptError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScriptError(step, std::string(format_command(commands[i])) + ": " + e.what());
    }
  }
  return run;
}

}  // namespace coldbench::sim
