#include "coldbench/sim/fridge_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coldbench::sim {

namespace {

double ramp_level(double from, double to, Millis ramp_start, Millis settle, Millis t) {
  if (t <= ramp_start) return from;
  if (settle <= 0 || t - ramp_start >= settle) return to;
  const double fraction = static_cast<double>(t - ramp_start) / static_cast<double>(settle);
  return from + (to - from) * fraction;
}

}  // namespace

void SimConfig::validate(const std::vector<ItemProfile>& catalog) const {
  if (position_count == 0) throw ConfigError("sim: position_count must be positive");
  if (!(reading_rate_hz > 0.0)) throw ConfigError("sim: reading_rate_hz must be positive");
  if (!(frame_rate_hz > 0.0)) throw ConfigError("sim: frame_rate_hz must be positive");
  if (noise_amplitude < 0.0) throw ConfigError("sim: noise_amplitude must be non-negative");
  if (settle_time_ms < 0) throw ConfigError("sim: settle_time_ms must be non-negative");
  for (const auto& item : catalog) {
    if (item.reflective && !(item.steady_level < empty_level)) {
      throw ConfigError("sim: reflective item '" + item.name + "' must read below the empty level");
    }
    if (!item.reflective && !(item.steady_level > empty_level)) {
      throw ConfigError("sim: non-reflective item '" + item.name + "' must read above the empty level");
    }
    if (!(noise_amplitude < std::abs(item.steady_level - empty_level) / 2.0)) {
      throw ConfigError("sim: noise_amplitude too large for item '" + item.name + "'");
    }
  }
}

Millis output_time(const SimOutput& output) {
  return std::visit([](const auto& o) -> Millis { return o.timestamp; }, output);
}

FridgeSim::FridgeSim(SimConfig config, VirtualClock& clock)
    : config_(config), clock_(clock), rng_(config.rng_seed) {
  config_.validate();
  channels_.assign(config_.position_count,
                   Channel{config_.empty_level, config_.empty_level, clock_.now(), std::nullopt, {}});
  // The reading grid is anchored at the clock's value when the sim is created.
  opened_at_ = clock_.now();
  reading_origin_ = clock_.now();
}

FridgeSim::Channel& FridgeSim::channel(Position position) {
  if (position >= channels_.size()) {
    throw std::out_of_range("position " + std::to_string(position) + " out of range");
  }
  return channels_[position];
}

const FridgeSim::Channel& FridgeSim::channel(Position position) const {
  if (position >= channels_.size()) {
    throw std::out_of_range("position " + std::to_string(position) + " out of range");
  }
  return channels_[position];
}

const std::optional<ItemProfile>& FridgeSim::item_at(Position position) const {
  return channel(position).item;
}

DoorEvent FridgeSim::open_door() {
  if (door_open_) throw SimError("door is already open");
  door_open_ = true;
  opened_at_ = clock_.now();
  next_frame_ = 1;
  ++activity_;
  current_label_.clear();
  current_presentation_ = 0;
  return {true, clock_.now()};
}

DoorEvent FridgeSim::close_door() {
  if (!door_open_) throw SimError("door is already closed");
  door_open_ = false;
  current_label_.clear();
  current_presentation_ = 0;
  return {false, clock_.now()};
}

void FridgeSim::retarget(Channel& ch, double to) {
  const Millis now = clock_.now();
  ch.from = ramp_level(ch.from, ch.to, ch.ramp_start, config_.settle_time_ms, now);
  ch.to = to;
  ch.ramp_start = now;
}

void FridgeSim::place(const ItemProfile& item, Position position) {
  Channel& ch = channel(position);
  if (!door_open_) throw SimError("cannot place with the door closed");
  if (ch.item) throw SimError("position " + std::to_string(position) + " is already occupied");
  ch.item = item;
  retarget(ch, item.steady_level);
  current_label_ = item.name;
  current_presentation_ = ++presentation_;

  if (!item.reflective && bernoulli(rng_, config_.nonreflective_crosstalk_prob)) {
    std::vector<Position> neighbours;
    if (position > 0) neighbours.push_back(position - 1);
    if (position + 1 < channels_.size()) neighbours.push_back(position + 1);
    if (!neighbours.empty()) {
      const Position neighbour = neighbours[uniform_index(rng_, neighbours.size())];
      occlude(neighbour, config_.crosstalk_ms, item.steady_level);
    }
  }
}

void FridgeSim::remove(Position position) {
  Channel& ch = channel(position);
  if (!door_open_) throw SimError("cannot remove with the door closed");
  if (!ch.item) throw SimError("position " + std::to_string(position) + " is empty");
  ch.item.reset();
  retarget(ch, config_.empty_level);
}

void FridgeSim::occlude(Position position, Millis duration_ms, std::optional<double> level) {
  if (duration_ms <= 0) throw SimError("occlusion duration must be positive");
  const Millis now = clock_.now();
  channel(position).occlusions.push_back({now, now + duration_ms, level.value_or(config_.occlusion_level)});
}

double FridgeSim::level(Position position, Millis t) const {
  const Channel& ch = channel(position);
  for (auto it = ch.occlusions.rbegin(); it != ch.occlusions.rend(); ++it) {
    if (it->start <= t && t < it->end) return it->level;
  }
  return ramp_level(ch.from, ch.to, ch.ramp_start, config_.settle_time_ms, t);
}

Millis FridgeSim::reading_time(std::uint64_t index) const {
  return reading_origin_ +
         static_cast<Millis>(std::llround(static_cast<double>(index) * 1000.0 / config_.reading_rate_hz));
}

Millis FridgeSim::frame_time(std::uint64_t index) const {
  return opened_at_ +
         static_cast<Millis>(std::llround(static_cast<double>(index) * 1000.0 / config_.frame_rate_hz));
}

std::vector<SimOutput> FridgeSim::step(Millis dt) {
  if (dt <= 0) throw std::invalid_argument("step needs dt > 0");
  const Millis target = clock_.now() + dt;

  std::vector<SimOutput> out;
  for (Millis t = reading_time(next_reading_); t <= target; t = reading_time(++next_reading_)) {
    for (Position pos = 0; pos < channels_.size(); ++pos) {
      double value = level(pos, t);
      if (config_.noise_amplitude > 0.0) {
        value += uniform(rng_, -config_.noise_amplitude, config_.noise_amplitude);
      }
      out.emplace_back(detection::SensorReading{pos, std::max(0.0, value), t});
    }
  }

  if (door_open_) {
    std::vector<SimOutput> frames;
    for (Millis t = frame_time(next_frame_); t <= target; t = frame_time(++next_frame_)) {
      frames.emplace_back(CameraFrame{++frame_id_, activity_, t, current_presentation_, current_label_});
    }
    const auto middle = out.size();
    out.insert(out.end(), frames.begin(), frames.end());
    std::inplace_merge(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(middle), out.end(),
                       [](const SimOutput& a, const SimOutput& b) { return output_time(a) < output_time(b); });
  }

  clock_.advance(dt);
  for (auto& ch : channels_) {
    std::erase_if(ch.occlusions, [&](const Occlusion& o) { return o.end <= target; });
  }
  return out;
}

}  // namespace coldbench::sim
