#include "coldbench/testbed/virtual_fridge.hpp"

#include <algorithm>

namespace coldbench::testbed {

namespace {

sim::SimConfig seeded(sim::SimConfig c, std::uint64_t seed) {
  c.rng_seed = derive_seed(seed, 1);
  return c;
}

}  // namespace

VirtualFridge::VirtualFridge(TestbedConfig config, std::uint64_t seed)
    : config_(std::move(config)),
      sim_(seeded(config_.sim, seed), clock_),
      engine_(config_.engine) {
  config_.validate();
  auto recognizer = std::make_shared<recognition::SimulatedRecognizer>(config_.recognizer, derive_seed(seed, 2));
  recognition::PipelineOptions options;
  options.token_seed = derive_seed(seed, 3);
  pipeline_ = std::make_unique<recognition::RecognitionPipeline>(
      config_.recognizer, recognition::Canonicalizer(config_.rules), std::move(recognizer), options);
}

void VirtualFridge::emit(const std::vector<detection::DetectionEvent>& events) {
  for (const auto& e : events) {
    events_.push_back(e);
    if (sink_) sink_(e);
  }
}

void VirtualFridge::open_door() {
  const sim::DoorEvent e = sim_.open_door();
  trace_.push_back({e.timestamp, detection::DoorOpened{}});
  emit(engine_.door_open(e.timestamp));
}

void VirtualFridge::close_door() {
  const sim::DoorEvent e = sim_.close_door();
  trace_.push_back({e.timestamp, detection::DoorClosed{}});
  emit(engine_.door_close(e.timestamp));
}

void VirtualFridge::place(const std::string& item, Position position) {
  sim_.place(sim::find_item(config_.catalog, item), position);
}

void VirtualFridge::remove(Position position) { sim_.remove(position); }

void VirtualFridge::occlude(Position position, Millis duration_ms) { sim_.occlude(position, duration_ms); }

void VirtualFridge::wait(Millis ms) { advance(now() + ms, {}); }

void VirtualFridge::execute(const sim::SimCommand& command) {
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, sim::OpenDoor>) {
          open_door();
        } else if constexpr (std::is_same_v<T, sim::CloseDoor>) {
          close_door();
        } else if constexpr (std::is_same_v<T, sim::Place>) {
          place(c.item, c.position);
        } else if constexpr (std::is_same_v<T, sim::Remove>) {
          remove(c.position);
        } else if constexpr (std::is_same_v<T, sim::Wait>) {
          if (c.ms < 0) throw std::invalid_argument("wait needs a non-negative duration");
          wait(c.ms);
        } else {
          occlude(c.position, c.ms);
        }
      },
      command);
}

std::optional<Millis> VirtualFridge::ack_time(ActivityId activity) const {
  const auto it = acks_.find(activity);
  if (it == acks_.end()) return std::nullopt;
  return it->second;
}

std::optional<Millis> VirtualFridge::wait_for_ack(Millis timeout_ms) {
  const ActivityId act = activity();
  advance(now() + timeout_ms, [&] { return acks_.contains(act); });
  return ack_time(act);
}

void VirtualFridge::handle(const sim::SimOutput& output) {
  if (const auto* r = std::get_if<detection::SensorReading>(&output)) {
    trace_.push_back({r->timestamp, detection::Reading{r->position, r->value}});
    engine_.reading(*r);
  } else if (const auto* f = std::get_if<sim::CameraFrame>(&output)) {
    pipeline_->submit({f->frame_id, f->activity_id, f->presentation_id, f->timestamp, f->label}, f->timestamp);
  }
}

void VirtualFridge::handle(const recognition::RecognitionResult& result) {
  if (result.presentation_id != 0) acks_.try_emplace(result.activity_id, result.completed_at);
  if (result.name) {
    trace_.push_back({result.completed_at, detection::Recognized{*result.name, result.activity_id}});
    emit(engine_.recognized(*result.name, result.activity_id, result.completed_at));
  }
  results_.push_back(result);
}

void VirtualFridge::advance(Millis target, const std::function<bool()>& stop) {
  while (now() < target) {
    Millis next = std::min(target, now() + config_.tick_ms);
    if (const auto c = pipeline_->next_completion(); c && *c < next) next = std::max(*c, now() + 1);

    const auto outputs = sim_.step(next - now());
    auto it = outputs.begin();
    for (; it != outputs.end() && sim::output_time(*it) < next; ++it) handle(*it);
    for (const auto& result : pipeline_->advance_to(next)) handle(result);
    for (; it != outputs.end(); ++it) handle(*it);

    if (stop && stop()) return;
  }
}

}  // namespace coldbench::testbed
