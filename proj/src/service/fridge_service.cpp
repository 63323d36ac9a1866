#include "coldbench/service/fridge_service.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <random>

#include "coldbench/service/codec.hpp"

namespace coldbench::service {

using nlohmann::json;

namespace {

constexpr const char* kEventsSuffix = ".events.jsonl";
constexpr const char* kTagsSuffix = ".tags.jsonl";

Millis wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

struct FridgeService::Fridge {
  FridgeId id;
  mutable std::mutex mu;
  std::condition_variable cv;
  std::vector<EventEnvelope> log;
  std::vector<HistoryEntry> history;
  std::shared_ptr<const FridgeSnapshot> snapshot;
  std::vector<detection::LedColor> leds;
  std::map<std::string, std::set<std::string>> tags;
  std::ofstream events_out;
  std::ofstream tags_out;
};

FridgeService::FridgeService(ServiceOptions options)
    : options_(std::move(options)), id_rng_(options_.id_seed ? *options_.id_seed : std::random_device{}()) {
  if (!options_.clock) options_.clock = wall_clock_ms;
  if (options_.data_dir) {
    std::filesystem::create_directories(*options_.data_dir);
    load(*options_.data_dir);
  }
}

FridgeService::~FridgeService() { shutdown(); }

void FridgeService::shutdown() {
  shutting_down_ = true;
  std::shared_lock lock(registry_mu_);
  for (const auto& [id, f] : fridges_) {
    std::lock_guard g(f->mu);
    f->cv.notify_all();
  }
}

Millis FridgeService::now() const { return options_.clock(); }

Millis FridgeService::clamp_timeout(std::optional<Millis> timeout_ms) const {
  const Millis t = timeout_ms.value_or(options_.default_poll_timeout_ms);
  return std::clamp<Millis>(t, 0, options_.max_poll_timeout_ms);
}

std::shared_ptr<FridgeService::Fridge> FridgeService::create(const FridgeId& id) {
  auto f = std::make_shared<Fridge>();
  f->id = id;
  f->leds.assign(options_.position_count, detection::LedColor::off);
  auto snap = std::make_shared<FridgeSnapshot>();
  snap->fridge_id = id;
  f->snapshot = std::move(snap);
  if (options_.data_dir) {
    f->events_out.open(*options_.data_dir / (id + kEventsSuffix), std::ios::app);
    f->tags_out.open(*options_.data_dir / (id + kTagsSuffix), std::ios::app);
    if (!f->events_out || !f->tags_out) throw std::runtime_error("cannot open log files for fridge " + id);
  }
  return f;
}

void FridgeService::append(Fridge& f, const EventEnvelope& envelope) {
  f.log.push_back(envelope);
  auto next = std::make_shared<FridgeSnapshot>(*f.snapshot);
  next->head_seq = envelope.seq;
  next->last_activity = std::max(next->last_activity, envelope.event.activity_id);
  if (envelope.event.kind == detection::EventKind::door_open) next->door_open = true;
  if (envelope.event.kind == detection::EventKind::door_close) next->door_open = false;
  if (auto entry = history_entry(envelope)) {
    f.history.push_back(*entry);
    next->contents = apply(std::move(next->contents), *entry);
  }
  f.snapshot = std::move(next);
}

void FridgeService::load(const std::filesystem::path& dir) {
  for (const auto& file : std::filesystem::directory_iterator(dir)) {
    const std::string name = file.path().filename().string();
    if (!ends_with(name, kEventsSuffix)) continue;
    const FridgeId id = name.substr(0, name.size() - std::string(kEventsSuffix).size());

    std::vector<EventEnvelope> envelopes;
    bool torn = false;
    {
      std::ifstream in(file.path());
      for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        try {
          envelopes.push_back(json::parse(line).get<EventEnvelope>());
        } catch (const json::exception&) {
          torn = true;  // a torn final line from a crash; everything before it stands
          break;
        }
      }
    }
    if (torn) {
      // Drop the fragment so later appends start on a clean line.
      std::ofstream out(file.path(), std::ios::trunc);
      for (const auto& e : envelopes) out << json(e).dump() << '\n';
    }
    std::map<std::string, std::set<std::string>> tags;
    {
      std::ifstream tags_in(dir / (id + kTagsSuffix));
      for (std::string line; std::getline(tags_in, line);) {
        if (line.empty()) continue;
        try {
          const json j = json::parse(line);
          auto set = j.at("tags").get<std::set<std::string>>();
          if (set.empty()) {
            tags.erase(j.at("name").get<std::string>());
          } else {
            tags[j.at("name").get<std::string>()] = std::move(set);
          }
        } catch (const json::exception&) {
          break;
        }
      }
    }
    {
      // Compact: one line per tagged item, which also drops a torn tail.
      std::ofstream out(dir / (id + kTagsSuffix), std::ios::trunc);
      for (const auto& [name, set] : tags) out << json{{"name", name}, {"tags", set}}.dump() << '\n';
    }

    auto f = create(id);
    for (const auto& e : envelopes) append(*f, e);
    f->tags = std::move(tags);
    fridges_[id] = std::move(f);
  }
}

FridgeId FridgeService::register_fridge() {
  FridgeId id;
  {
    std::lock_guard lock(id_mu_);
    static constexpr char kHex[] = "0123456789abcdef";
    do {
      std::uint64_t bits = id_rng_();
      id.clear();
      for (int i = 0; i < 16; ++i, bits >>= 4) id.push_back(kHex[bits & 0xF]);
    } while (exists(id));
  }
  auto f = create(id);
  std::unique_lock lock(registry_mu_);
  fridges_[id] = std::move(f);
  return id;
}

bool FridgeService::exists(const FridgeId& id) const {
  std::shared_lock lock(registry_mu_);
  return fridges_.contains(id);
}

std::vector<FridgeId> FridgeService::fridge_ids() const {
  std::shared_lock lock(registry_mu_);
  std::vector<FridgeId> ids;
  for (const auto& [id, f] : fridges_) ids.push_back(id);
  return ids;
}

std::shared_ptr<FridgeService::Fridge> FridgeService::fridge(const FridgeId& id) const {
  std::shared_lock lock(registry_mu_);
  const auto it = fridges_.find(id);
  if (it == fridges_.end()) throw NotFound("unknown fridge '" + id + "'");
  return it->second;
}

Seq FridgeService::publish(const FridgeId& id, const detection::DetectionEvent& event) {
  auto f = fridge(id);
  const bool positional = event.kind == detection::EventKind::add || event.kind == detection::EventKind::remove;
  if (positional && (!event.position || *event.position >= options_.position_count)) {
    throw std::invalid_argument(std::string(detection::to_string(event.kind)) + " event needs a valid position");
  }
  EventEnvelope envelope;
  {
    std::lock_guard lock(f->mu);
    envelope = EventEnvelope{id, f->log.size() + 1, event, now()};
    if (f->events_out.is_open()) {
      f->events_out << json(envelope).dump() << '\n';
      f->events_out.flush();
    }
    append(*f, envelope);
  }
  f->cv.notify_all();
  return envelope.seq;
}

std::vector<EventEnvelope> FridgeService::poll(const FridgeId& id, Seq cursor, std::optional<Millis> timeout_ms) {
  auto f = fridge(id);
  const auto timeout = std::chrono::milliseconds(clamp_timeout(timeout_ms));
  std::unique_lock lock(f->mu);
  f->cv.wait_for(lock, timeout, [&] { return f->log.size() > cursor || shutting_down_.load(); });
  if (f->log.size() <= cursor) return {};
  return {f->log.begin() + static_cast<std::ptrdiff_t>(cursor), f->log.end()};
}

std::shared_ptr<const FridgeSnapshot> FridgeService::get_state(const FridgeId& id) const {
  auto f = fridge(id);
  std::lock_guard lock(f->mu);
  return f->snapshot;
}

std::vector<HistoryEntry> FridgeService::get_history(const FridgeId& id, std::optional<Millis> since,
                                                     const std::optional<std::string>& item) const {
  auto f = fridge(id);
  std::lock_guard lock(f->mu);
  std::vector<HistoryEntry> out;
  for (const auto& h : f->history) {
    if (since && h.timestamp < *since) continue;
    if (item && h.item.name != *item) continue;
    out.push_back(h);
  }
  return out;
}

std::vector<EventEnvelope> FridgeService::get_log(const FridgeId& id) const {
  auto f = fridge(id);
  std::lock_guard lock(f->mu);
  return f->log;
}

std::vector<detection::LedColor> FridgeService::leds(const FridgeId& id) const {
  auto f = fridge(id);
  std::lock_guard lock(f->mu);
  return f->leds;
}

void FridgeService::set_leds(const FridgeId& id, const std::vector<detection::LedColor>& colors) {
  auto f = fridge(id);
  if (colors.size() != options_.position_count) throw std::out_of_range("LED vector has the wrong length");
  std::lock_guard lock(f->mu);
  f->leds = colors;
}

std::set<std::string> FridgeService::set_tags(const FridgeId& id, const std::string& item,
                                              const std::vector<std::string>& tags) {
  auto f = fridge(id);
  std::set<std::string> normalized;
  for (const auto& t : tags) {
    if (!t.empty()) normalized.insert(lowercase(t));
  }
  std::lock_guard lock(f->mu);
  if (normalized.empty()) {
    f->tags.erase(item);
  } else {
    f->tags[item] = normalized;
  }
  if (f->tags_out.is_open()) {
    f->tags_out << json{{"name", item}, {"tags", normalized}}.dump() << '\n';
    f->tags_out.flush();
  }
  return normalized;
}

std::map<std::string, std::set<std::string>> FridgeService::tags(const FridgeId& id) const {
  auto f = fridge(id);
  std::lock_guard lock(f->mu);
  return f->tags;
}

}  // namespace coldbench::service
