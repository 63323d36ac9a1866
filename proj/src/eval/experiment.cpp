#include "coldbench/eval/experiment.hpp"

#include <cmath>
#include <map>

#include "coldbench/testbed/virtual_fridge.hpp"

namespace coldbench::eval {

using detection::Action;
using detection::DetectionEvent;
using detection::EventKind;

namespace {

Millis to_ms(double seconds) { return static_cast<Millis>(std::llround(seconds * 1000.0)); }

double to_s(Millis ms) { return static_cast<double>(ms) / 1000.0; }

}  // namespace

Prediction predict_from_events(const std::vector<DetectionEvent>& activity_events,
                               const std::function<std::optional<std::string>(ItemId)>& names) {
  Prediction p;
  for (const auto& e : activity_events) {
    if (e.kind != EventKind::add && e.kind != EventKind::remove) continue;
    if (++p.event_count > 1) continue;
    p.action = e.kind == EventKind::add ? Action::add : Action::remove;
    p.position = e.position;
    if (e.item) {
      p.item = names(e.item->item_id);
      if (e.item->activity_id > 0) p.instance = static_cast<std::size_t>(e.item->activity_id - 1);
    }
  }
  return p;
}

ExperimentRun run_experiment(const testbed::TestbedConfig& base, const ExperimentOptions& options) {
  const testbed::TestbedConfig config = base.with_flavor(options.flavor);
  ExperimentRun run;
  run.flavor = options.flavor;
  run.seed = options.seed;
  run.items = config.flavors.at(options.flavor).items;

  const auto script =
      generate_script(options.steps, run.items, config.sim.position_count, derive_seed(options.seed, 10));
  testbed::VirtualFridge fridge(config, derive_seed(options.seed, 11));
  Rng person(derive_seed(options.seed, 12));
  const testbed::HumanTiming& timing = config.timing;

  // Let the sensor windows fill before the first opening.
  fridge.wait(to_ms(timing.gap_s));

  std::vector<double> durations(script.size()), baselines(script.size());
  for (const auto& gt : script) {
    const Millis opened = fridge.now();
    switch (gt.action) {
      case Action::add: {
        const double reach = uniform(person, timing.add_reach_min_s, timing.add_reach_max_s);
        const double putdown = uniform(person, timing.putdown_min_s, timing.putdown_max_s);
        fridge.open_door();
        fridge.place(gt.item, *gt.position);
        fridge.wait_for_ack(to_ms(timing.ack_timeout_s));
        fridge.wait(to_ms(putdown));
        fridge.close_door();
        baselines[gt.index] = to_s(to_ms(reach) + to_ms(putdown));
        break;
      }
      case Action::remove: {
        const double reach = uniform(person, timing.remove_reach_min_s, timing.remove_reach_max_s);
        const double release = uniform(person, timing.remove_release_min_s, timing.remove_release_max_s);
        fridge.open_door();
        fridge.wait(to_ms(reach));
        fridge.remove(*gt.position);
        fridge.wait(to_ms(release));
        fridge.close_door();
        baselines[gt.index] = to_s(to_ms(reach) + to_ms(release));
        break;
      }
      case Action::none: {
        const double hold = uniform(person, timing.none_min_s, timing.none_max_s);
        fridge.open_door();
        fridge.wait(to_ms(hold));
        fridge.close_door();
        baselines[gt.index] = to_s(to_ms(hold));
        break;
      }
    }
    durations[gt.index] = to_s(fridge.now() - opened);
    fridge.wait(to_ms(timing.gap_s));
  }

  std::map<ActivityId, std::vector<DetectionEvent>> by_activity;
  for (const auto& e : fridge.events()) by_activity[e.activity_id].push_back(e);
  const auto& items = fridge.engine().items();
  const auto names = [&](ItemId id) -> std::optional<std::string> {
    const auto* record = items.find(id);
    return record ? record->name : std::nullopt;
  };

  for (const auto& gt : script) {
    ExperimentStep step;
    step.ground_truth = gt;
    step.predicted = predict_from_events(by_activity[gt.index + 1], names);
    step.truth = classify(gt, step.predicted);
    step.door_open_duration_s = durations[gt.index];
    step.baseline_duration_s = baselines[gt.index];
    run.steps.push_back(std::move(step));
  }
  run.events = fridge.events();
  run.virtual_duration_ms = fridge.now();
  return run;
}

}  // namespace coldbench::eval
