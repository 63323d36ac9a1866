#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "coldbench/core/types.hpp"
#include "coldbench/detection/types.hpp"
#include "coldbench/sim/virtual_clock.hpp"

namespace coldbench::sim {

struct ItemProfile {
  std::string name;
  bool reflective = true;
  double steady_level = 150.0;
  std::optional<std::string> barcode;

  static ItemProfile reflective_item(std::string name, double level = 150.0) {
    return {std::move(name), true, level, std::nullopt};
  }
  static ItemProfile non_reflective_item(std::string name, double level = 650.0) {
    return {std::move(name), false, level, std::nullopt};
  }
};

struct SimConfig {
  std::size_t position_count = 4;
  double empty_level = 400.0;
  /// Half-width of the uniform noise added to every reading.
  double noise_amplitude = 20.0;
  double reading_rate_hz = 1.0;
  double frame_rate_hz = 5.0;
  Millis settle_time_ms = 2000;
  /// Level seen by a sensor while a hand blocks it.
  double occlusion_level = 150.0;
  /// Chance that placing a non-reflective item also lights up a neighbouring
  /// sensor for `crosstalk_ms`.
  double nonreflective_crosstalk_prob = 0.0;
  Millis crosstalk_ms = 1000;
  std::uint64_t rng_seed = 0;

  /// Throws ConfigError on bad rates or when the noise band could make an
  /// item level indistinguishable from the empty shelf.
  void validate(const std::vector<ItemProfile>& catalog = {}) const;
};

struct CameraFrame {
  std::uint64_t frame_id = 0;
  ActivityId activity_id = 0;
  Millis timestamp = 0;
  /// Identifies one placement; frames of the same placement are duplicates.
  std::uint64_t presentation_id = 0;
  std::string label;
};

struct DoorEvent {
  bool opened = false;
  Millis timestamp = 0;
};

using SimOutput = std::variant<detection::SensorReading, DoorEvent, CameraFrame>;

Millis output_time(const SimOutput& output);

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical layer of one fridge: door, per-position IR levels with linear
/// settle ramps and noise, occlusion transients, and a camera that emits
/// frames only while the door is open.
class FridgeSim {
 public:
  FridgeSim(SimConfig config, VirtualClock& clock);

  DoorEvent open_door();
  DoorEvent close_door();
  /// Requires an open door and a physically empty position.
  void place(const ItemProfile& item, Position position);
  /// Requires an open door and an occupied position.
  void remove(Position position);
  void occlude(Position position, Millis duration_ms, std::optional<double> level = std::nullopt);

  /// Advances the clock by `dt` and returns everything emitted in
  /// (now, now + dt], time-ordered.
  std::vector<SimOutput> step(Millis dt);

  /// Noise-free signal level at `position` at time `t`.
  double level(Position position, Millis t) const;
  std::string frame_content(const CameraFrame& frame) const { return frame.label; }

  bool door_open() const { return door_open_; }
  ActivityId activity() const { return activity_; }
  const std::optional<ItemProfile>& item_at(Position position) const;
  Millis now() const { return clock_.now(); }
  const SimConfig& config() const { return config_; }

 private:
  struct Occlusion {
    Millis start;
    Millis end;
    double level;
  };
  struct Channel {
    double from;
    double to;
    Millis ramp_start;
    std::optional<ItemProfile> item;
    std::vector<Occlusion> occlusions;
  };

  Channel& channel(Position position);
  const Channel& channel(Position position) const;
  void retarget(Channel& channel, double to);
  Millis reading_time(std::uint64_t index) const;
  Millis frame_time(std::uint64_t index) const;

  SimConfig config_;
  VirtualClock& clock_;
  Rng rng_;
  std::vector<Channel> channels_;
  bool door_open_ = false;
  Millis opened_at_ = 0;
  Millis reading_origin_ = 0;
  ActivityId activity_ = 0;
  std::uint64_t next_reading_ = 1;
  std::uint64_t next_frame_ = 1;
  std::uint64_t frame_id_ = 0;
  std::uint64_t presentation_ = 0;
  std::string current_label_;
  std::uint64_t current_presentation_ = 0;
};

}  // namespace coldbench::sim
