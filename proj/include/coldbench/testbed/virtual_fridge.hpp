#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coldbench/detection/engine.hpp"
#include "coldbench/recognition/pipeline.hpp"
#include "coldbench/sim/fridge_sim.hpp"
#include "coldbench/sim/script.hpp"
#include "coldbench/testbed/config.hpp"

namespace coldbench::testbed {

/// One complete simulated fridge: physical sim, recognition pipeline and
/// detection engine sharing a virtual clock.
///
/// Sim outputs and recognition results are fed to the engine in time order;
/// at equal timestamps recognition results go first. Frames are submitted to
/// the pipeline as they are emitted.
class VirtualFridge {
 public:
  using EventSink = std::function<void(const detection::DetectionEvent&)>;

  VirtualFridge(TestbedConfig config, std::uint64_t seed);

  /// Called for every detection event, in order, on the driving thread.
  void set_sink(EventSink sink) { sink_ = std::move(sink); }

  void open_door();
  void close_door();
  void place(const std::string& item, Position position);
  void remove(Position position);
  void occlude(Position position, Millis duration_ms);
  void wait(Millis ms);
  /// Runs one script command. Throws sim::SimError / std::out_of_range on
  /// invalid commands without changing state.
  void execute(const sim::SimCommand& command);

  /// Waits until the recognizer has answered (hit or miss) for a frame that
  /// shows the item placed in the current activity. Returns the answer time,
  /// or nothing after `timeout_ms`.
  std::optional<Millis> wait_for_ack(Millis timeout_ms);
  /// Time of the first answer for a labelled frame of `activity`, if any.
  std::optional<Millis> ack_time(ActivityId activity) const;

  Millis now() const { return clock_.now(); }
  ActivityId activity() const { return sim_.activity(); }

  const std::vector<detection::DetectionEvent>& events() const { return events_; }
  /// Replayable trace: door events, readings and recognitions with activity.
  const std::vector<detection::TraceRecord>& trace() const { return trace_; }
  const std::vector<recognition::RecognitionResult>& results() const { return results_; }

  const detection::DetectionEngine& engine() const { return engine_; }
  detection::DetectionEngine& engine() { return engine_; }
  const sim::FridgeSim& sim() const { return sim_; }
  const recognition::RecognitionPipeline& pipeline() const { return *pipeline_; }
  const TestbedConfig& config() const { return config_; }

 private:
  void advance(Millis target, const std::function<bool()>& stop);
  void handle(const sim::SimOutput& output);
  void handle(const recognition::RecognitionResult& result);
  void emit(const std::vector<detection::DetectionEvent>& events);

  TestbedConfig config_;
  sim::VirtualClock clock_;
  sim::FridgeSim sim_;
  std::unique_ptr<recognition::RecognitionPipeline> pipeline_;
  detection::DetectionEngine engine_;
  EventSink sink_;
  std::vector<detection::DetectionEvent> events_;
  std::vector<detection::TraceRecord> trace_;
  std::vector<recognition::RecognitionResult> results_;
  std::map<ActivityId, Millis> acks_;
};

}  // namespace coldbench::testbed
