#include "coldbench/service/http_server.hpp"

#include <httplib.h>

#include <regex>

#include "coldbench/service/codec.hpp"

namespace coldbench::service {

using nlohmann::json;

namespace {

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool valid_callback(const std::string& name) {
  static const std::regex re(R"([A-Za-z_$][A-Za-z0-9_$]*(\.[A-Za-z_$][A-Za-z0-9_$]*)*)");
  return name.size() <= 128 && std::regex_match(name, re);
}

void reply(const httplib::Request& req, httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  if (req.has_param("callback")) {
    const auto cb = req.get_param_value("callback");
    if (valid_callback(cb)) {
      res.set_content(cb + "(" + body.dump() + ");", "application/javascript");
      return;
    }
    res.status = 400;
    res.set_content(json{{"error", "bad_request"}, {"message", "invalid callback name"}}.dump(), "application/json");
    return;
  }
  res.set_content(body.dump(), "application/json");
}

void error(const httplib::Request& req, httplib::Response& res, int status, const std::string& code,
           const std::string& message, json extra = json::object()) {
  extra["error"] = code;
  extra["message"] = message;
  reply(req, res, extra, status);
}

std::optional<std::int64_t> int_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string v = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const auto n = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw BadRequest(std::string("query parameter '") + name + "' must be an integer");
  }
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw BadRequest(std::string("malformed JSON body: ") + e.what());
  }
}

json suggestions_json(const std::vector<takeout::Suggestion>& list) {
  json out = json::array();
  for (const auto& s : list) out.push_back({{"position", s.position}, {"item", s.item}, {"reason", s.reason}});
  return out;
}

json leds_json(const std::vector<detection::LedColor>& leds) {
  json out = json::array();
  for (auto c : leds) out.push_back(std::string(detection::to_string(c)));
  return out;
}

std::vector<sim::SimCommand> commands_from(const httplib::Request& req) {
  const bool is_json = req.get_header_value("Content-Type").find("json") != std::string::npos ||
                       (!req.body.empty() && (req.body.front() == '{' || req.body.front() == '['));
  if (!is_json) return sim::parse_script(req.body);

  const json body = parse_body(req);
  const json& list = body.is_object() ? body.value("commands", json::array()) : body;
  if (!list.is_array()) throw BadRequest("expected a list of commands");
  std::string script;
  for (const auto& c : list) {
    if (c.is_string()) {
      script += c.get<std::string>();
    } else if (c.is_object() && c.contains("op")) {
      std::string line = c.at("op").get<std::string>();
      if (c.contains("item")) line += " " + c.at("item").get<std::string>();
      if (c.contains("position")) line += " " + std::to_string(c.at("position").get<std::size_t>());
      if (c.contains("ms")) line += " " + std::to_string(c.at("ms").get<Millis>());
      script += line;
    } else {
      throw BadRequest("each command is a script line or an object with 'op'");
    }
    script += '\n';
  }
  return sim::parse_script(script);
}

}  // namespace

HttpServer::HttpServer(FridgeService& service, ServerOptions options)
    : service_(service), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  options_.takeout.validate();
  if (options_.demo) {
    options_.testbed = options_.testbed.with_flavor(options_.demo_flavor);
    options_.testbed.sim.position_count = service_.position_count();
    options_.testbed.validate();
  }
  routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start() {
  port_ = options_.port == 0 ? server_->bind_to_any_port(options_.host)
                             : (server_->bind_to_port(options_.host, options_.port) ? options_.port : -1);
  if (port_ < 0) throw std::runtime_error("cannot bind " + options_.host + ":" + std::to_string(options_.port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

bool HttpServer::run() {
  port_ = options_.port;
  return server_->listen(options_.host, options_.port);
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::shared_ptr<HttpServer::DemoFridge> HttpServer::demo_fridge(const FridgeId& id) {
  std::lock_guard lock(demo_mu_);
  auto& slot = demo_[id];
  if (!slot) {
    slot = std::make_shared<DemoFridge>();
    slot->fridge = std::make_unique<testbed::VirtualFridge>(options_.testbed,
                                                            derive_seed(options_.demo_seed, 30 + demo_.size()));
    slot->fridge->set_sink([this, id](const detection::DetectionEvent& e) { service_.publish(id, e); });
  }
  return slot;
}

void HttpServer::refresh_leds(const FridgeId& id, bool door_open, Millis now) {
  const auto state = service_.get_state(id);
  const auto rec = takeout::TakeoutRecommender::from_history(service_.get_history(id), options_.takeout);
  const auto red = rec.expiry_alerts(state->contents, now);
  std::vector<takeout::Suggestion> green;
  if (door_open) green = rec.door_open_recommendations(state->contents, now);
  service_.set_leds(id, takeout::led_overlay(service_.position_count(), red, green));
}

void HttpServer::routes() {
  auto& s = *server_;

  s.set_exception_handler([](const httplib::Request& req, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const NotFound& e) {
      error(req, res, 404, "not_found", e.what());
    } catch (const BadRequest& e) {
      error(req, res, 400, "bad_request", e.what());
    } catch (const sim::ScriptError& e) {
      error(req, res, 400, "bad_request", e.what(), {{"step", e.step()}});
    } catch (const json::exception& e) {
      error(req, res, 400, "bad_request", e.what());
    } catch (const std::invalid_argument& e) {
      error(req, res, 400, "bad_request", e.what());
    } catch (const std::out_of_range& e) {
      error(req, res, 400, "bad_request", e.what());
    } catch (const std::exception& e) {
      error(req, res, 500, "internal", e.what());
    }
  });

  s.Post("/fridges", [this](const httplib::Request& req, httplib::Response& res) {
    reply(req, res, {{"fridge_id", service_.register_fridge()}}, 201);
  });

  s.Get("/fridges", [this](const httplib::Request& req, httplib::Response& res) {
    reply(req, res, {{"fridges", service_.fridge_ids()}});
  });

  s.Post("/fridges/:id/events", [this](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    if (!service_.exists(id)) throw NotFound("unknown fridge '" + id + "'");
    const json body = parse_body(req);
    std::vector<detection::DetectionEvent> events;
    if (body.is_array()) {
      for (const auto& e : body) events.push_back(e.get<detection::DetectionEvent>());
    } else {
      events.push_back(body.get<detection::DetectionEvent>());
    }
    json seqs = json::array();
    for (const auto& e : events) {
      seqs.push_back(service_.publish(id, e));
      if (e.kind == detection::EventKind::door_open) refresh_leds(id, true, service_.now());
    }
    reply(req, res, {{"seq", seqs.back()}, {"seqs", seqs}}, 201);
  });

  s.Get("/fridges/:id/state", [this](const httplib::Request& req, httplib::Response& res) {
    reply(req, res, *service_.get_state(req.path_params.at("id")));
  });

  s.Get("/fridges/:id/history", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> item;
    if (req.has_param("item")) item = req.get_param_value("item");
    reply(req, res, {{"history", service_.get_history(req.path_params.at("id"), int_param(req, "since"), item)}});
  });

  s.Get("/fridges/:id/poll", [this](const httplib::Request& req, httplib::Response& res) {
    const auto cursor = int_param(req, "cursor").value_or(0);
    if (cursor < 0) throw BadRequest("cursor must be non-negative");
    const auto events = service_.poll(req.path_params.at("id"), static_cast<Seq>(cursor), int_param(req, "timeout_ms"));
    const Seq next = events.empty() ? static_cast<Seq>(cursor) : events.back().seq;
    reply(req, res, {{"events", events}, {"cursor", next}});
  });

  s.Get("/fridges/:id/leds", [this](const httplib::Request& req, httplib::Response& res) {
    reply(req, res, {{"leds", leds_json(service_.leds(req.path_params.at("id")))}});
  });

  s.Get("/fridges/:id/recommendations", [this](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    const Millis now = int_param(req, "now").value_or(service_.now());
    const auto state = service_.get_state(id);
    const auto rec = takeout::TakeoutRecommender::from_history(service_.get_history(id), options_.takeout);
    const auto red = rec.expiry_alerts(state->contents, now);
    const auto green = rec.door_open_recommendations(state->contents, now);
    const auto leds = takeout::led_overlay(service_.position_count(), red, green);
    service_.set_leds(id, leds);
    reply(req, res, {{"recommendations", suggestions_json(green)}, {"leds", leds_json(leds)}});
  });

  s.Get("/fridges/:id/alerts", [this](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    const Millis now = int_param(req, "now").value_or(service_.now());
    const auto state = service_.get_state(id);
    const auto rec = takeout::TakeoutRecommender::from_history(service_.get_history(id), options_.takeout);
    const auto red = rec.expiry_alerts(state->contents, now);
    const auto leds = takeout::led_overlay(service_.position_count(), red, {});
    service_.set_leds(id, leds);
    reply(req, res, {{"alerts", suggestions_json(red)}, {"leds", leds_json(leds)}});
  });

  s.Get("/fridges/:id/search", [this](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    const auto state = service_.get_state(id);
    const auto hits = takeout::search(req.get_param_value("q"), state->contents, service_.tags(id));
    const auto leds = takeout::led_overlay(service_.position_count(), {}, hits);
    service_.set_leds(id, leds);
    reply(req, res, {{"results", suggestions_json(hits)}, {"leds", leds_json(leds)}});
  });

  s.Put("/fridges/:id/items/:name/tags", [this](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    const std::string name = httplib::detail::decode_url(req.path_params.at("name"), true);
    const json body = parse_body(req);
    const json& list = body.is_object() ? body.at("tags") : body;
    const auto tags = service_.set_tags(id, name, list.get<std::vector<std::string>>());
    reply(req, res, {{"name", name}, {"tags", tags}});
  });

  if (options_.demo) {
    s.Post("/fridges/:id/sim/commands", [this](const httplib::Request& req, httplib::Response& res) {
      const auto& id = req.path_params.at("id");
      if (!service_.exists(id)) throw NotFound("unknown fridge '" + id + "'");
      const auto commands = commands_from(req);
      const Millis settle = int_param(req, "settle_ms").value_or(options_.demo_settle_ms);
      if (settle < 0) throw BadRequest("settle_ms must be non-negative");

      auto demo = demo_fridge(id);
      std::lock_guard lock(demo->mu);
      auto& vf = *demo->fridge;
      const std::size_t first_event = vf.events().size();
      std::size_t executed = 0;
      for (const auto& c : commands) {
        try {
          vf.execute(c);
        } catch (const std::exception& e) {
          error(req, res, 409, "conflict", e.what(),
                {{"step", executed + 1}, {"executed", executed}, {"now_ms", vf.now()}});
          return;
        }
        ++executed;
        if (!std::holds_alternative<sim::Wait>(c) && settle > 0) vf.wait(settle);
      }
      json events = json::array();
      for (std::size_t i = first_event; i < vf.events().size(); ++i) events.push_back(vf.events()[i]);
      reply(req, res,
            {{"executed", executed},
             {"now_ms", vf.now()},
             {"door_open", vf.sim().door_open()},
             {"events", events}});
    });

    s.Get("/fridges/:id/sim", [this](const httplib::Request& req, httplib::Response& res) {
      const auto& id = req.path_params.at("id");
      if (!service_.exists(id)) throw NotFound("unknown fridge '" + id + "'");
      auto demo = demo_fridge(id);
      std::lock_guard lock(demo->mu);
      json items = json::array();
      for (const auto& p : demo->fridge->config().catalog) items.push_back(p.name);
      reply(req, res,
            {{"now_ms", demo->fridge->now()},
             {"door_open", demo->fridge->sim().door_open()},
             {"positions", service_.position_count()},
             {"catalog", items}});
    });
  }

  if (options_.console_dir) {
    if (!s.set_mount_point("/console", options_.console_dir->string())) {
      throw ConfigError("console directory '" + options_.console_dir->string() + "' does not exist");
    }
  }

  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) error(req, res, 404, "not_found", "no route for " + req.path);
  });
}

}  // namespace coldbench::service
