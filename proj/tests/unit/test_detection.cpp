#include <doctest.h>

#include "coldbench/detection/engine.hpp"
#include "coldbench/sim/script.hpp"
#include "properties.hpp"

using namespace coldbench;
using namespace coldbench::detection;

namespace {

PositionStats stats_with(std::initializer_list<double> values) {
  PositionStats s(5);
  s.reset_activity();
  for (double v : values) s.ingest(v, true);
  return s;
}

// Sets min/max/last directly through a window of constant readings:
// feeding 5 x a, then 5 x b, then 5 x c gives means spanning a..c with last c.
PositionStats stats_min_max_last(double lo, double hi, double last) {
  PositionStats s(5);
  for (int i = 0; i < 5; ++i) s.ingest(hi, true);
  for (int i = 0; i < 5; ++i) s.ingest(lo, true);
  for (int i = 0; i < 5; ++i) s.ingest(last, true);
  return s;
}

std::vector<TraceRecord> sim_trace(const std::string& script, double noise = 0.0) {
  sim::SimConfig config;
  config.noise_amplitude = noise;
  sim::VirtualClock clock;
  sim::FridgeSim fridge(config, clock);
  std::vector<sim::ItemProfile> catalog = {sim::ItemProfile::reflective_item("coke"),
                                           sim::ItemProfile::non_reflective_item("milk")};
  return sim::run_script(fridge, sim::parse_script(script), catalog).trace;
}

std::vector<DetectionEvent> of_kind(const std::vector<DetectionEvent>& events, EventKind kind) {
  std::vector<DetectionEvent> out;
  for (const auto& e : events) {
    if (e.kind == kind) out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_SUITE("detection.window") {
  TEST_CASE("constant window yields the constant as min, max and last") {
    auto s = stats_with({400, 400, 400, 400});
    CHECK_FALSE(s.has_window_mean());
    s = ingest_reading(s, 400, true);
    REQUIRE(s.has_window_mean());
    CHECK(*s.window_mean() == 400.0);
    CHECK(*s.minval() == 400.0);
    CHECK(*s.maxval() == 400.0);
    CHECK(*s.lastval() == 400.0);
  }

  TEST_CASE("descending trace: min follows the dip, max stays at the start") {
    // 400 x5, then a linear fall to 150 over 5 readings, then 150 x5.
    // Hand-computed 5-sample means: first 400, last 150.
    std::vector<double> trace(5, 400.0);
    for (int i = 1; i <= 5; ++i) trace.push_back(400.0 - 50.0 * i);
    for (int i = 0; i < 5; ++i) trace.push_back(150.0);
    PositionStats s(5);
    for (double v : trace) s.ingest(v, true);
    CHECK(*s.maxval() == doctest::Approx(400.0));
    CHECK(*s.minval() == doctest::Approx(150.0));
    CHECK(*s.lastval() == doctest::Approx(150.0));
    // Second mean: (400*4 + 350) / 5 = 390.
    PositionStats t(5);
    for (int i = 0; i < 6; ++i) t.ingest(trace[static_cast<std::size_t>(i)], true);
    CHECK(*t.lastval() == doctest::Approx(390.0));
  }

  TEST_CASE("fewer than five readings in the activity give no mean, even with a full raw window") {
    PositionStats s(5);
    for (int i = 0; i < 10; ++i) s.ingest(400, false);
    s.reset_activity();
    for (int i = 0; i < 4; ++i) s.ingest(150, true);
    CHECK(s.window().size() == 5);
    CHECK_FALSE(s.has_window_mean());
    CHECK(decide(s, ThresholdConfig{}, false) == Action::none);
  }

  TEST_CASE("readings outside an activity advance the window only") {
    PositionStats s(5);
    for (int i = 0; i < 5; ++i) s.ingest(150, false);
    CHECK(s.window() == std::vector<double>(5, 150.0));
    CHECK_FALSE(s.minval().has_value());
  }

  TEST_CASE("zero window size is rejected") { CHECK_THROWS_AS(PositionStats(0), std::invalid_argument); }

  TEST_CASE("window mean matches a brute-force recompute on 1000 random traces") {
    const auto r = props::window_mean_bruteforce(1000, 7);
    INFO(r.failure);
    CHECK(r.ok);
    CHECK(r.cases == 1000);
  }
}

TEST_SUITE("detection.decide") {
  const ThresholdConfig th{250, 550, 250, 520};

  TEST_CASE("reflective placement on a free position is an add") {
    CHECK(decide(stats_min_max_last(150, 420, 150), th, false) == Action::add);
  }
  TEST_CASE("last value inside the output band on an occupied position is a remove") {
    CHECK(decide(stats_min_max_last(390, 410, 400), th, true) == Action::remove);
  }
  TEST_CASE("remove requires occupancy") {
    CHECK(decide(stats_min_max_last(390, 410, 400), th, false) == Action::none);
  }
  TEST_CASE("add requires a free position") {
    CHECK(decide(stats_min_max_last(150, 420, 150), th, true) == Action::none);
  }
  TEST_CASE("non-reflective placement fires through the max threshold") {
    CHECK(decide(stats_min_max_last(400, 650, 650), th, false) == Action::add);
  }
  TEST_CASE("add is tested before remove") {
    // min below it_min and last inside the output band, free position: add.
    CHECK(decide(stats_min_max_last(150, 400, 400), th, false) == Action::add);
  }
  TEST_CASE("no window mean means no decision") {
    CHECK(decide(PositionStats(5), th, false) == Action::none);
    CHECK(decide(PositionStats(5), th, true) == Action::none);
  }
  TEST_CASE("threshold ordering is validated") {
    CHECK_THROWS_AS((ThresholdConfig{300, 200, 250, 520}.validate()), ConfigError);
    CHECK_THROWS_AS((ThresholdConfig{250, 550, 520, 250}.validate()), ConfigError);
    CHECK_NOTHROW(ThresholdConfig{}.validate());
  }
  TEST_CASE("decide is a pure function of the statistics") {
    const auto s = stats_min_max_last(150, 420, 150);
    for (int i = 0; i < 3; ++i) CHECK(decide(s, th, false) == Action::add);
  }
}

TEST_SUITE("detection.close_activity") {
  TEST_CASE("no readings at all: no events, occupancy unchanged") {
    std::vector<PositionStats> stats(4, PositionStats(5));
    std::vector<bool> occ(4, false);
    CHECK(close_activity(stats, ThresholdConfig{}, occ).empty());
    CHECK(occ == std::vector<bool>(4, false));
  }

  TEST_CASE("mismatched occupancy map is rejected") {
    std::vector<PositionStats> stats(4, PositionStats(5));
    std::vector<bool> occ(3, false);
    CHECK_THROWS_AS(close_activity(stats, ThresholdConfig{}, occ), std::invalid_argument);
  }

  TEST_CASE("single placement at position 2 yields exactly one add at 2") {
    const auto events = replay(sim_trace("wait 5000\nopen\nwait 1000\nplace coke 2\nwait 6000\nclose\n"), {});
    const auto adds = of_kind(events, EventKind::add);
    REQUIRE(adds.size() == 1);
    CHECK(*adds[0].position == 2);
    CHECK(of_kind(events, EventKind::remove).empty());
  }

  TEST_CASE("removing from positions 1 and 3 in one activity yields two removes") {
    const auto events = replay(sim_trace("open\nwait 1000\nplace coke 1\nplace milk 3\nwait 8000\nclose\nwait 5000\n"
                                         "open\nwait 1000\nremove 1\nremove 3\nwait 8000\nclose\n"),
                               {});
    const auto removes = of_kind(events, EventKind::remove);
    REQUIRE(removes.size() == 2);
    CHECK(*removes[0].position == 1);
    CHECK(*removes[1].position == 3);
  }

  TEST_CASE("door open and close with no level change is a none") {
    const auto events = replay(sim_trace("wait 5000\nopen\nwait 8000\nclose\n", 20.0), {});
    CHECK(of_kind(events, EventKind::add).empty());
    CHECK(of_kind(events, EventKind::remove).empty());
    CHECK(of_kind(events, EventKind::door_open).size() == 1);
    CHECK(of_kind(events, EventKind::door_close).size() == 1);
  }

  TEST_CASE("stats reset after close") {
    std::vector<PositionStats> stats(1, stats_min_max_last(150, 400, 150));
    std::vector<bool> occ(1, false);
    CHECK(close_activity(stats, ThresholdConfig{}, occ).size() == 1);
    CHECK_FALSE(stats[0].has_window_mean());
    CHECK(occ[0]);
  }

  TEST_CASE("occupancy gates hold over 10000 random event sequences") {
    const auto r = props::occupancy_gates(10000, 11);
    INFO(r.failure);
    CHECK(r.ok);
    CHECK(r.cases == 10000);
  }
}

TEST_SUITE("detection.correlate") {
  TEST_CASE("recognition first: pending record attaches to the later add") {
    ItemStore store(4, 10'000);
    const auto t1 = store.on_recognition("coke", 7, 0);
    CHECK(t1.kind == Transition::Kind::pending_created);
    CHECK(t1.record.state == ItemState::pending);
    CHECK_FALSE(t1.record.position.has_value());
    const auto t2 = store.on_add(2, 7, 3000);
    CHECK(t2.kind == Transition::Kind::pending_attached);
    CHECK(store.records().size() == 1);
    const auto* rec = store.occupant(2);
    REQUIRE(rec);
    CHECK(rec->state == ItemState::complete);
    CHECK(*rec->name == "coke");
    CHECK(*rec->position == 2);
  }

  TEST_CASE("position first: placeholder filled by the recognition of the same activity") {
    ItemStore store(4, 10'000);
    const auto t1 = store.on_add(1, 8, 0);
    CHECK(t1.kind == Transition::Kind::placeholder_created);
    CHECK(t1.record.state == ItemState::placeholder);
    CHECK_FALSE(t1.record.name.has_value());
    const auto t2 = store.on_recognition("milk", 8, 2000);
    CHECK(t2.kind == Transition::Kind::placeholder_filled);
    CHECK(t2.record.state == ItemState::complete);
    CHECK(*store.occupant(1)->name == "milk");
    CHECK(store.records().size() == 1);
  }

  TEST_CASE("same name 12 s apart in one activity: two pending records") {
    ItemStore store(4, 10'000);
    store.on_recognition("coke", 9, 0);
    const auto t = store.on_recognition("coke", 9, 12'000);
    CHECK(t.kind == Transition::Kind::pending_created);
    CHECK(store.records().size() == 2);
  }

  TEST_CASE("same name 4 s apart in one activity: one pending record") {
    ItemStore store(4, 10'000);
    store.on_recognition("coke", 9, 0);
    const auto t = store.on_recognition("coke", 9, 4'000);
    CHECK(t.kind == Transition::Kind::collapsed);
    CHECK(store.records().size() == 1);
  }

  TEST_CASE("the dedup chain extends with each hit") {
    ItemStore store(4, 10'000);
    for (Millis t = 0; t <= 40'000; t += 8'000) store.on_recognition("coke", 9, t);
    CHECK(store.records().size() == 1);
  }

  TEST_CASE("same name in another activity is a new item") {
    ItemStore store(4, 10'000);
    store.on_recognition("coke", 9, 0);
    store.on_recognition("coke", 10, 1000);
    CHECK(store.records().size() == 2);
  }

  TEST_CASE("placeholders only take names from their own activity") {
    ItemStore store(4, 10'000);
    store.on_add(0, 3, 0);
    const auto t = store.on_recognition("milk", 4, 100);
    CHECK(t.kind == Transition::Kind::pending_created);
    CHECK(store.occupant(0)->state == ItemState::placeholder);
  }

  TEST_CASE("an add on an occupied position supersedes the old record") {
    ItemStore store(4, 10'000);
    store.on_recognition("coke", 1, 0);
    const auto first = store.on_add(2, 1, 100).record;
    const auto t = store.on_add(2, 2, 5000);
    REQUIRE(t.displaced.has_value());
    CHECK(t.displaced->item_id == first.item_id);
    CHECK(t.displaced->state == ItemState::removed);
    CHECK(t.displaced->removal_reason == "displaced");
    CHECK(store.occupant(2)->item_id == t.record.item_id);
    CHECK(store.live_records().size() == 1);
  }

  TEST_CASE("unmatched pending records expire at the close of the next activity") {
    ItemStore store(4, 10'000);
    store.on_recognition("coke", 1, 0);
    CHECK(store.on_activity_closed(1).empty());
    const auto expired = store.on_activity_closed(2);
    REQUIRE(expired.size() == 1);
    CHECK(expired[0].removal_reason == "expired");
    CHECK(store.live_records().empty());
    // A later add creates a placeholder instead of picking up the stale name.
    CHECK(store.on_add(0, 3, 100).kind == Transition::Kind::placeholder_created);
  }

  TEST_CASE("remove at an empty position is a logic error; bad positions are range errors") {
    ItemStore store(4, 10'000);
    CHECK_THROWS_AS(store.on_remove(1, 0), std::logic_error);
    CHECK_THROWS_AS(store.on_add(4, 1, 0), std::out_of_range);
  }
}

TEST_SUITE("detection.engine") {
  TEST_CASE("activity ids strictly increase and only one activity is open") {
    DetectionEngine engine;
    CHECK(engine.current_activity() == 0);
    CHECK(engine.door_open(0).size() == 1);
    CHECK(engine.door_open(10).empty());
    CHECK(engine.current_activity() == 1);
    engine.door_close(20);
    CHECK(engine.door_close(30).empty());
    engine.door_open(40);
    CHECK(engine.current_activity() == 2);
    CHECK(engine.activity()->opened_at == 40);
  }

  TEST_CASE("readings for unknown positions are range errors") {
    DetectionEngine engine;
    CHECK_THROWS_AS(engine.reading({4, 100.0, 0}), std::out_of_range);
  }

  TEST_CASE("recognition then add: the add event carries the complete record") {
    DetectionEngine engine;
    engine.door_open(0);
    for (Millis t = 0; t < 1000; t += 100) engine.reading({0, 150.0, t});
    CHECK(engine.recognized("coke", 1, 500).empty());
    const auto events = engine.door_close(1000);
    const auto adds = of_kind(events, EventKind::add);
    REQUIRE(adds.size() == 1);
    CHECK(adds[0].item->state == ItemState::complete);
    CHECK(*adds[0].item->name == "coke");
    CHECK(adds[0].activity_id == 1);
  }

  TEST_CASE("add then late recognition: item_complete follows the placeholder") {
    DetectionEngine engine;
    engine.door_open(0);
    for (Millis t = 0; t < 1000; t += 100) engine.reading({3, 650.0, t});
    const auto events = engine.door_close(1000);
    REQUIRE(of_kind(events, EventKind::add).size() == 1);
    CHECK(of_kind(events, EventKind::add)[0].item->state == ItemState::placeholder);
    const auto later = engine.recognized("milk", 1, 3000);
    REQUIRE(later.size() == 1);
    CHECK(later[0].kind == EventKind::item_complete);
    CHECK(*later[0].position == 3);
    CHECK(*later[0].item->name == "milk");
  }

  TEST_CASE("trace records dispatch and recognitions default to the current activity") {
    const auto trace = parse_trace("0 door_open\n"
                                   "100 reading 0 150\n200 reading 0 150\n300 reading 0 150\n"
                                   "400 reading 0 150\n500 reading 0 150\n"
                                   "600 recognized coca cola\n"
                                   "700 door_close\n");
    const auto events = replay(trace, {});
    const auto adds = of_kind(events, EventKind::add);
    REQUIRE(adds.size() == 1);
    CHECK(*adds[0].item->name == "coca cola");
  }

  TEST_CASE("noise-free reflective script is detected exactly") {
    const auto trace = sim_trace(
        "wait 3000\nopen\nwait 500\nplace coke 0\nwait 6000\nclose\nwait 4000\n"
        "open\nwait 500\nplace coke 2\nwait 6000\nclose\nwait 4000\n"
        "open\nwait 500\nremove 0\nwait 6000\nclose\nwait 4000\n"
        "open\nwait 3000\nclose\n");
    const auto events = replay(trace, {});
    const auto adds = of_kind(events, EventKind::add);
    const auto removes = of_kind(events, EventKind::remove);
    REQUIRE(adds.size() == 2);
    REQUIRE(removes.size() == 1);
    CHECK(*adds[0].position == 0);
    CHECK(adds[0].activity_id == 1);
    CHECK(*adds[1].position == 2);
    CHECK(adds[1].activity_id == 2);
    CHECK(*removes[0].position == 0);
    CHECK(removes[0].activity_id == 3);
  }

  TEST_CASE("replaying the same trace twice gives identical events") {
    const auto trace = sim_trace("open\nwait 500\nplace milk 1\nwait 5000\nclose\n", 20.0);
    CHECK(replay(trace, {}) == replay(trace, {}));
  }
}

TEST_SUITE("detection.trace") {
  TEST_CASE("format and parse round-trip") {
    const std::vector<TraceRecord> records = {{0, DoorOpened{}},
                                              {100, Reading{2, 151.25}},
                                              {200, Recognized{"banana milk", 4}},
                                              {250, Recognized{"coke", std::nullopt}},
                                              {300, DoorClosed{}}};
    CHECK(parse_trace(format_trace(records)) == records);
  }

  TEST_CASE("comments and blank lines are skipped") {
    CHECK(parse_trace("# header\n\n0 door_open # inline\n").size() == 1);
  }

  TEST_CASE("malformed lines name the line number") {
    try {
      parse_trace("0 door_open\nabc reading 1 2\n");
      FAIL("expected a parse error");
    } catch (const TraceParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_trace("5 reading 1\n"), TraceParseError);
    CHECK_THROWS_AS(parse_trace("5 teleport\n"), TraceParseError);
  }
}

TEST_SUITE("detection.leds") {
  TEST_CASE("last write wins and off is idempotent") {
    LedPanel leds(4);
    leds.set(2, LedColor::red);
    CHECK(leds.get(2) == LedColor::red);
    leds.set(2, LedColor::green);
    CHECK(leds.get(2) == LedColor::green);
    leds.set(1, LedColor::off);
    leds.set(1, LedColor::off);
    CHECK(leds.get(1) == LedColor::off);
  }
  TEST_CASE("invalid positions are range errors") {
    LedPanel leds(4);
    CHECK_THROWS_AS(leds.set(4, LedColor::red), std::out_of_range);
    CHECK_THROWS_AS(leds.get(9), std::out_of_range);
  }
  TEST_CASE("color names round-trip") {
    for (auto c : {LedColor::off, LedColor::red, LedColor::green}) CHECK(led_color_from_string(to_string(c)) == c);
  }
}
