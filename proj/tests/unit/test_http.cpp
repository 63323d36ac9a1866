#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "coldbench/core/types.hpp"
#include "coldbench/service/fridge_service.hpp"
#include "coldbench/service/http_server.hpp"

using namespace coldbench;
using namespace coldbench::service;
using nlohmann::json;

namespace {

struct Harness {
  FridgeService svc;
  HttpServer server;
  httplib::Client client;

  explicit Harness(ServerOptions options = {}, ServiceOptions service_options = {})
      : svc(std::move(service_options)), server(svc, std::move(options)), client("127.0.0.1", server.start()) {
    client.set_read_timeout(10, 0);
  }
  ~Harness() {
    svc.shutdown();
    server.stop();
  }

  std::string fridge() {
    auto r = client.Post("/fridges");
    REQUIRE(r);
    REQUIRE(r->status == 201);
    return json::parse(r->body).at("fridge_id").get<std::string>();
  }

  json post(const std::string& path, const json& body, int expect) {
    auto r = client.Post(path, body.dump(), "application/json");
    REQUIRE(r);
    CHECK_MESSAGE(r->status == expect, r->body);
    return json::parse(r->body);
  }

  json get(const std::string& path, int expect = 200) {
    auto r = client.Get(path);
    REQUIRE(r);
    CHECK_MESSAGE(r->status == expect, r->body);
    return json::parse(r->body);
  }
};

json add_json(Position pos, const std::string& name, ItemId id, Millis t) {
  return {{"kind", "add"},
          {"position", pos},
          {"timestamp", t},
          {"activity_id", 1},
          {"item", {{"item_id", id}, {"name", name}, {"position", pos}, {"state", "complete"}, {"added_at", t},
                    {"activity_id", 1}}}};
}

json remove_json(Position pos, const std::string& name, ItemId id, Millis added, Millis t) {
  return {{"kind", "remove"},
          {"position", pos},
          {"timestamp", t},
          {"activity_id", 2},
          {"item", {{"item_id", id}, {"name", name}, {"position", pos}, {"state", "removed"}, {"added_at", added},
                    {"removed_at", t}, {"activity_id", 1}}}};
}

ServerOptions demo_options() {
  ServerOptions o;
  o.demo = true;
  o.demo_flavor = "soda";
  o.testbed = testbed::default_config();
  o.testbed.flavors.at("soda").p_hit = 1.0;
  return o;
}

}  // namespace

TEST_SUITE("http.core") {
  TEST_CASE("register, publish, state, history, poll") {
    Harness h;
    const auto id = h.fridge();
    CHECK(h.get("/fridges").at("fridges") == json::array({id}));

    auto r = h.post("/fridges/" + id + "/events", add_json(2, "coke", 1, 1000), 201);
    CHECK(r.at("seq") == 1);
    r = h.post("/fridges/" + id + "/events",
               json::array({add_json(0, "milk", 2, 2000), remove_json(2, "coke", 1, 1000, 3000)}), 201);
    CHECK(r.at("seqs") == json::array({2, 3}));

    const auto state = h.get("/fridges/" + id + "/state");
    CHECK(state.at("seq") == 3);
    REQUIRE(state.at("positions").size() == 1);
    CHECK(state.at("positions").at("0").at("name") == "milk");

    CHECK(h.get("/fridges/" + id + "/history").at("history").size() == 3);
    CHECK(h.get("/fridges/" + id + "/history?item=coke").at("history").size() == 2);
    CHECK(h.get("/fridges/" + id + "/history?since=99999").at("history").empty());

    const auto polled = h.get("/fridges/" + id + "/poll?cursor=1&timeout_ms=0");
    REQUIRE(polled.at("events").size() == 2);
    CHECK(polled.at("events")[0].at("seq") == 2);
    CHECK(polled.at("events")[0].at("kind") == "add");
    CHECK(polled.at("cursor") == 3);
    CHECK(h.get("/fridges/" + id + "/leds").at("leds") == json::array({"off", "off", "off", "off"}));
  }

  TEST_CASE("long poll is released by a publish") {
    Harness h;
    const auto id = h.fridge();
    json got;
    std::thread poller([&] {
      httplib::Client c("127.0.0.1", h.server.port());
      c.set_read_timeout(10, 0);
      auto r = c.Get("/fridges/" + id + "/poll?cursor=0&timeout_ms=5000");
      if (r) got = json::parse(r->body);
    });
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    h.post("/fridges/" + id + "/events", json{{"kind", "door_open"}, {"timestamp", 5}}, 201);
    poller.join();
    REQUIRE(got.is_object());
    CHECK(got.at("events").size() == 1);
    CHECK(got.at("cursor") == 1);
  }

  TEST_CASE("errors") {
    Harness h;
    const auto id = h.fridge();
    CHECK(h.get("/fridges/nope/state", 404).at("error") == "not_found");
    CHECK(h.get("/no/such/route", 404).at("error") == "not_found");
    CHECK(h.post("/fridges/nope/events", json{{"kind", "door_open"}}, 404).at("error") == "not_found");
    CHECK(h.get("/fridges/" + id + "/poll?cursor=abc", 400).at("error") == "bad_request");
    CHECK(h.get("/fridges/" + id + "/poll?cursor=-1", 400).at("error") == "bad_request");
    CHECK(h.post("/fridges/" + id + "/events", json{{"kind", "explode"}}, 400).at("error") == "bad_request");
    CHECK(h.post("/fridges/" + id + "/events", json{{"kind", "add"}, {"timestamp", 1}}, 400).at("error") ==
          "bad_request");
    auto r = h.client.Post("/fridges/" + id + "/events", "{not json", "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
    CHECK(h.get("/fridges/" + id + "/state").at("seq") == 0);
  }

  TEST_CASE("JSONP") {
    Harness h;
    const auto id = h.fridge();
    auto r = h.client.Get("/fridges/" + id + "/leds?callback=app.onLeds");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(r->get_header_value("Content-Type") == "application/javascript");
    CHECK(r->body.rfind("app.onLeds(", 0) == 0);
    CHECK(r->body.substr(r->body.size() - 2) == ");");
    r = h.client.Get("/fridges/" + id + "/leds?callback=alert(1)");
    REQUIRE(r);
    CHECK(r->status == 400);
  }

  TEST_CASE("demo routes are absent unless enabled") {
    Harness h;
    const auto id = h.fridge();
    auto r = h.client.Post("/fridges/" + id + "/sim/commands", R"(["open"])", "application/json");
    REQUIRE(r);
    CHECK(r->status == 404);
  }
}

TEST_SUITE("http.takeout") {
  TEST_CASE("tags, search and LEDs") {
    Harness h;
    const auto id = h.fridge();
    h.post("/fridges/" + id + "/events", json::array({add_json(1, "soy milk", 1, 10), add_json(3, "coke", 2, 20)}),
           201);
    auto r = h.client.Put("/fridges/" + id + "/items/soy%20milk/tags", R"({"tags":["Pancakes","drink"]})",
                          "application/json");
    REQUIRE(r);
    CHECK(r->status == 200);
    const auto tagged = json::parse(r->body);
    CHECK(tagged.at("name") == "soy milk");
    CHECK(tagged.at("tags") == json::array({"drink", "pancakes"}));

    const auto hits = h.get("/fridges/" + id + "/search?q=pancakes");
    REQUIRE(hits.at("results").size() == 1);
    CHECK(hits.at("results")[0].at("position") == 1);
    CHECK(hits.at("leds") == json::array({"off", "green", "off", "off"}));
    CHECK(h.get("/fridges/" + id + "/leds").at("leds") == hits.at("leds"));
    CHECK(h.get("/fridges/" + id + "/search?q=caviar").at("results").empty());
  }

  TEST_CASE("alerts and recommendations from history") {
    Harness h;
    const auto id = h.fridge();
    constexpr Millis kHour = 3'600'000;
    constexpr Millis kDay = 24 * kHour;
    json batch = json::array();
    ItemId next = 1;
    for (int d = 0; d < 4; ++d) {
      const Millis added = d * kDay;
      const Millis removed = added + 7 * kHour;
      batch.push_back(add_json(0, "milk", next, added));
      batch.push_back(remove_json(0, "milk", next, added, removed));
      ++next;
    }
    batch.push_back(add_json(0, "milk", next, 10 * kDay));
    batch.push_back(add_json(2, "coke", next + 1, 20 * kDay));
    h.post("/fridges/" + id + "/events", batch, 201);

    const Millis now = 20 * kDay + 7 * kHour + 60'000;
    const auto alerts = h.get("/fridges/" + id + "/alerts?now=" + std::to_string(now));
    REQUIRE(alerts.at("alerts").size() == 1);
    CHECK(alerts.at("alerts")[0].at("item") == "milk");
    CHECK(alerts.at("leds") == json::array({"red", "off", "off", "off"}));

    const auto recs = h.get("/fridges/" + id + "/recommendations?now=" + std::to_string(now));
    REQUIRE(recs.at("recommendations").size() == 1);
    CHECK(recs.at("recommendations")[0].at("position") == 0);
    CHECK(recs.at("leds") == json::array({"red", "off", "off", "off"}));
  }
}

TEST_SUITE("http.demo") {
  TEST_CASE("scripted commands drive detection visible through poll") {
    Harness h(demo_options());
    const auto id = h.fridge();
    const auto info = h.get("/fridges/" + id + "/sim");
    CHECK(info.at("door_open") == false);
    CHECK(info.at("positions") == 4);

    const auto out = h.post("/fridges/" + id + "/sim/commands",
                            json{{"commands", json::array({"open", "place coke 2", "close"})}}, 200);
    CHECK(out.at("executed") == 3);
    CHECK(out.at("door_open") == false);

    const auto polled = h.get("/fridges/" + id + "/poll?cursor=0&timeout_ms=0");
    bool added = false;
    for (const auto& e : polled.at("events")) {
      if (e.at("kind") == "add" && e.at("position") == 2) added = true;
    }
    CHECK(added);
    const auto state = h.get("/fridges/" + id + "/state");
    REQUIRE(state.at("positions").contains("2"));
    CHECK(state.at("positions").at("2").at("name") == "coke");
  }

  TEST_CASE("text scripts and structured commands") {
    Harness h(demo_options());
    const auto id = h.fridge();
    auto r = h.client.Post("/fridges/" + id + "/sim/commands?settle_ms=0", "open\nwait 500\nclose\n", "text/plain");
    REQUIRE(r);
    CHECK_MESSAGE(r->status == 200, r->body);
    CHECK(json::parse(r->body).at("executed") == 3);
    const auto out = h.post("/fridges/" + id + "/sim/commands?settle_ms=0",
                            json::array({json{{"op", "open"}}, json{{"op", "wait"}, {"ms", 250}}}), 200);
    CHECK(out.at("door_open") == true);
  }

  TEST_CASE("an impossible command is a conflict") {
    Harness h(demo_options());
    const auto id = h.fridge();
    const auto out = h.post("/fridges/" + id + "/sim/commands?settle_ms=0",
                            json{{"commands", json::array({"open", "remove 1"})}}, 409);
    CHECK(out.at("error") == "conflict");
    CHECK(out.at("step") == 2);
    CHECK(out.at("executed") == 1);
    CHECK(h.post("/fridges/" + id + "/sim/commands", json{{"commands", json::array({"dance"})}}, 400).at("error") ==
          "bad_request");
    CHECK(h.post("/fridges/nope/sim/commands", json{{"commands", json::array({"open"})}}, 404).at("error") ==
          "not_found");
  }
}

TEST_SUITE("http.console") {
  TEST_CASE("static files under /console/") {
    const auto dir = std::filesystem::temp_directory_path() / "coldbench_console_test";
    std::filesystem::create_directories(dir);
    {
      std::ofstream(dir / "index.html") << "<html>console</html>";
    }
    ServerOptions o;
    o.console_dir = dir;
    {
      Harness h(o);
      auto r = h.client.Get("/console/");
      REQUIRE(r);
      CHECK(r->status == 200);
      CHECK(r->body == "<html>console</html>");
      r = h.client.Get("/console/index.html");
      REQUIRE(r);
      CHECK(r->status == 200);
      r = h.client.Get("/console");
      REQUIRE(r);
      CHECK(r->status == 200);
      CHECK(r->body == "<html>console</html>");
      r = h.client.Get("/console/missing.js");
      REQUIRE(r);
      CHECK(r->status == 404);
    }
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("the shipped console is served") {
    ServerOptions o;
    o.console_dir = std::filesystem::path(COLDBENCH_SOURCE_DIR) / "console";
    Harness h(o);
    auto r = h.client.Get("/console/");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(r->body.find("/poll?cursor=") != std::string::npos);
  }

  TEST_CASE("missing console directory is a configuration error") {
    FridgeService svc;
    ServerOptions o;
    o.console_dir = "/nonexistent/console";
    CHECK_THROWS_AS(HttpServer(svc, o), ConfigError);
  }
}
