#include "coldbench/testbed/config.hpp"

#include <fstream>

#include "coldbench/sim/script.hpp"

namespace coldbench::testbed {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void read_sim(const json& j, sim::SimConfig& c) {
  read(j, "position_count", c.position_count);
  read(j, "empty_level", c.empty_level);
  read(j, "noise_amplitude", c.noise_amplitude);
  read(j, "reading_rate_hz", c.reading_rate_hz);
  read(j, "frame_rate_hz", c.frame_rate_hz);
  read(j, "settle_time_ms", c.settle_time_ms);
  read(j, "occlusion_level", c.occlusion_level);
  read(j, "nonreflective_crosstalk_prob", c.nonreflective_crosstalk_prob);
  read(j, "crosstalk_ms", c.crosstalk_ms);
  read(j, "rng_seed", c.rng_seed);
}

void read_recognizer(const json& j, recognition::RecognizerConfig& c) {
  read(j, "pool_size", c.pool_size);
  read(j, "latency_ms_min", c.latency_ms_min);
  read(j, "latency_ms_max", c.latency_ms_max);
  read(j, "p_hit", c.p_hit);
  read(j, "confusion_prob", c.confusion_prob);
  read(j, "strict_canonical", c.strict_canonical);
  read(j, "raw_phrases", c.raw_phrase_map);
}

void read_timing(const json& j, HumanTiming& t) {
  read(j, "add_reach_min_s", t.add_reach_min_s);
  read(j, "add_reach_max_s", t.add_reach_max_s);
  read(j, "putdown_min_s", t.putdown_min_s);
  read(j, "putdown_max_s", t.putdown_max_s);
  read(j, "remove_reach_min_s", t.remove_reach_min_s);
  read(j, "remove_reach_max_s", t.remove_reach_max_s);
  read(j, "remove_release_min_s", t.remove_release_min_s);
  read(j, "remove_release_max_s", t.remove_release_max_s);
  read(j, "none_min_s", t.none_min_s);
  read(j, "none_max_s", t.none_max_s);
  read(j, "gap_s", t.gap_s);
  read(j, "ack_timeout_s", t.ack_timeout_s);
}

}  // namespace

std::vector<sim::ItemProfile> default_catalog() {
  return {
      sim::ItemProfile::reflective_item("coke"),     sim::ItemProfile::reflective_item("sprite"),
      sim::ItemProfile::reflective_item("fanta"),    sim::ItemProfile::reflective_item("cider"),
      sim::ItemProfile::non_reflective_item("milk"), sim::ItemProfile::non_reflective_item("soy milk"),
      sim::ItemProfile::non_reflective_item("banana milk"), sim::ItemProfile::non_reflective_item("juice"),
  };
}

std::map<std::string, std::string> default_raw_phrases() {
  return {
      {"coke", "coca-cola classic 355ml can"},
      {"sprite", "sprite lemon-lime soda can"},
      {"fanta", "fanta orange soda can"},
      {"cider", "chilsung cider can"},
      {"milk", "seoul milk 1l carton"},
      {"soy milk", "vegemil soy milk pack"},
      {"banana milk", "binggrae banana flavored milk"},
      {"juice", "minute maid orange juice carton"},
  };
}

std::vector<recognition::CanonicalRule> default_rules() {
  return {
      {"coca.?cola|^coke$", "coke"},
      {"sprite", "sprite"},
      {"fanta", "fanta"},
      {"cider", "cider"},
      {"seoul milk|^milk$", "milk"},
      {"vegemil|^soy milk$", "soy milk"},
      {"banana", "banana milk"},
      {"orange juice|^juice$", "juice"},
  };
}

TestbedConfig default_config() {
  TestbedConfig c;
  c.sim.reading_rate_hz = 10.0;
  c.sim.settle_time_ms = 2000;
  c.engine.thresholds = {175.0, 625.0, 250.0, 520.0};
  c.recognizer.raw_phrase_map = default_raw_phrases();
  c.rules = default_rules();
  c.catalog = default_catalog();
  c.flavors["soda"] = Flavor{"soda", {"coke", "sprite", "fanta", "cider"}, 0.77, 0.0};
  c.flavors["mix"] = Flavor{"mix",
                            {"coke", "sprite", "fanta", "cider", "milk", "soy milk", "banana milk", "juice"},
                            0.82,
                            0.15};
  return c;
}

TestbedConfig TestbedConfig::with_flavor(const std::string& flavor) const {
  const auto it = flavors.find(flavor);
  if (it == flavors.end()) throw ConfigError("unknown flavor '" + flavor + "'");
  TestbedConfig c = *this;
  c.recognizer.p_hit = it->second.p_hit;
  c.sim.nonreflective_crosstalk_prob = it->second.nonreflective_crosstalk_prob;
  return c;
}

std::vector<sim::ItemProfile> TestbedConfig::items_of(const std::string& flavor) const {
  const auto it = flavors.find(flavor);
  if (it == flavors.end()) throw ConfigError("unknown flavor '" + flavor + "'");
  std::vector<sim::ItemProfile> items;
  for (const auto& name : it->second.items) items.push_back(sim::find_item(catalog, name));
  return items;
}

void TestbedConfig::validate() const {
  sim.validate(catalog);
  engine.thresholds.validate();
  recognizer.validate();
  (void)recognition::Canonicalizer{rules};
  if (engine.position_count != sim.position_count) {
    throw ConfigError("detection and sim position counts differ");
  }
  if (tick_ms <= 0) throw ConfigError("tick_ms must be positive");
  for (const auto& [name, flavor] : flavors) {
    if (flavor.items.empty()) throw ConfigError("flavor '" + name + "' has no items");
    for (const auto& item : flavor.items) sim::find_item(catalog, item);
  }
}

TestbedConfig config_from_json(const json& j) {
  TestbedConfig c = default_config();
  if (j.contains("sim")) read_sim(j.at("sim"), c.sim);
  if (j.contains("detection")) {
    const json& d = j.at("detection");
    read(d, "window_size", c.engine.window_size);
    read(d, "dedup_window_ms", c.engine.dedup_window_ms);
    if (d.contains("thresholds")) {
      const json& t = d.at("thresholds");
      read(t, "it_min", c.engine.thresholds.it_min);
      read(t, "it_max", c.engine.thresholds.it_max);
      read(t, "ot_min", c.engine.thresholds.ot_min);
      read(t, "ot_max", c.engine.thresholds.ot_max);
    }
  }
  c.engine.position_count = c.sim.position_count;
  if (j.contains("recognizer")) read_recognizer(j.at("recognizer"), c.recognizer);
  if (j.contains("rules")) {
    c.rules.clear();
    for (const json& r : j.at("rules")) c.rules.push_back({r.at("pattern").get<std::string>(), r.at("name").get<std::string>()});
  }
  if (j.contains("catalog")) {
    c.catalog.clear();
    for (const json& item : j.at("catalog")) {
      sim::ItemProfile p;
      p.name = item.at("name").get<std::string>();
      p.reflective = item.value("reflective", true);
      p.steady_level = item.value("steady_level", p.reflective ? 150.0 : 650.0);
      if (item.contains("barcode")) p.barcode = item.at("barcode").get<std::string>();
      c.catalog.push_back(std::move(p));
    }
  }
  if (j.contains("timing")) read_timing(j.at("timing"), c.timing);
  read(j, "barcode_overhead_s", c.barcode_overhead_s);
  read(j, "tick_ms", c.tick_ms);
  if (j.contains("flavors")) {
    for (const auto& [name, f] : j.at("flavors").items()) {
      Flavor flavor = c.flavors.contains(name) ? c.flavors.at(name) : Flavor{name, {}, 0.77, 0.0};
      read(f, "items", flavor.items);
      read(f, "p_hit", flavor.p_hit);
      read(f, "nonreflective_crosstalk_prob", flavor.nonreflective_crosstalk_prob);
      c.flavors[name] = flavor;
    }
  }
  c.validate();
  return c;
}

json config_to_json(const TestbedConfig& c) {
  json j;
  j["sim"] = {{"position_count", c.sim.position_count},
              {"empty_level", c.sim.empty_level},
              {"noise_amplitude", c.sim.noise_amplitude},
              {"reading_rate_hz", c.sim.reading_rate_hz},
              {"frame_rate_hz", c.sim.frame_rate_hz},
              {"settle_time_ms", c.sim.settle_time_ms},
              {"occlusion_level", c.sim.occlusion_level},
              {"nonreflective_crosstalk_prob", c.sim.nonreflective_crosstalk_prob},
              {"crosstalk_ms", c.sim.crosstalk_ms},
              {"rng_seed", c.sim.rng_seed}};
  j["detection"] = {{"window_size", c.engine.window_size},
                    {"dedup_window_ms", c.engine.dedup_window_ms},
                    {"thresholds",
                     {{"it_min", c.engine.thresholds.it_min},
                      {"it_max", c.engine.thresholds.it_max},
                      {"ot_min", c.engine.thresholds.ot_min},
                      {"ot_max", c.engine.thresholds.ot_max}}}};
  j["recognizer"] = {{"pool_size", c.recognizer.pool_size},
                     {"latency_ms_min", c.recognizer.latency_ms_min},
                     {"latency_ms_max", c.recognizer.latency_ms_max},
                     {"p_hit", c.recognizer.p_hit},
                     {"confusion_prob", c.recognizer.confusion_prob},
                     {"strict_canonical", c.recognizer.strict_canonical},
                     {"raw_phrases", c.recognizer.raw_phrase_map}};
  j["rules"] = json::array();
  for (const auto& r : c.rules) j["rules"].push_back({{"pattern", r.pattern}, {"name", r.canonical_name}});
  j["catalog"] = json::array();
  for (const auto& item : c.catalog) {
    json e = {{"name", item.name}, {"reflective", item.reflective}, {"steady_level", item.steady_level}};
    if (item.barcode) e["barcode"] = *item.barcode;
    j["catalog"].push_back(e);
  }
  const HumanTiming& t = c.timing;
  j["timing"] = {{"add_reach_min_s", t.add_reach_min_s},       {"add_reach_max_s", t.add_reach_max_s},
                 {"putdown_min_s", t.putdown_min_s},           {"putdown_max_s", t.putdown_max_s},
                 {"remove_reach_min_s", t.remove_reach_min_s}, {"remove_reach_max_s", t.remove_reach_max_s},
                 {"remove_release_min_s", t.remove_release_min_s},
                 {"remove_release_max_s", t.remove_release_max_s},
                 {"none_min_s", t.none_min_s},                 {"none_max_s", t.none_max_s},
                 {"gap_s", t.gap_s},                           {"ack_timeout_s", t.ack_timeout_s}};
  j["barcode_overhead_s"] = c.barcode_overhead_s;
  j["tick_ms"] = c.tick_ms;
  j["flavors"] = json::object();
  for (const auto& [name, f] : c.flavors) {
    j["flavors"][name] = {{"items", f.items}, {"p_hit", f.p_hit},
                          {"nonreflective_crosstalk_prob", f.nonreflective_crosstalk_prob}};
  }
  return j;
}

TestbedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace coldbench::testbed
