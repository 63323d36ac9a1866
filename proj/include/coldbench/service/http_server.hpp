#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "coldbench/service/fridge_service.hpp"
#include "coldbench/takeout/recommender.hpp"
#include "coldbench/testbed/config.hpp"
#include "coldbench/testbed/virtual_fridge.hpp"

namespace httplib {
class Server;
}

namespace coldbench::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 0;
  /// Enables POST /fridges/{id}/sim/commands, backed by one virtual fridge
  /// per registered fridge.
  bool demo = false;
  testbed::TestbedConfig testbed = testbed::default_config();
  std::string demo_flavor = "mix";
  std::uint64_t demo_seed = 1;
  /// Virtual time the demo fridge runs after every non-wait command, so a
  /// hand-driven open/place/close sequence settles and gets recognized.
  Millis demo_settle_ms = 6000;
  /// Static files served under /console/.
  std::optional<std::filesystem::path> console_dir;
  takeout::TakeoutConfig takeout;
};

/// JSON-over-HTTP front of a FridgeService, plus the takeout endpoints and
/// the optional demo sim controller.
class HttpServer {
 public:
  HttpServer(FridgeService& service, ServerOptions options);
  ~HttpServer();

  /// Binds and serves on a background thread; returns the bound port.
  int start();
  /// Serves on the calling thread until stop().
  bool run();
  void stop();
  int port() const { return port_; }

 private:
  struct DemoFridge {
    std::mutex mu;
    std::unique_ptr<testbed::VirtualFridge> fridge;
  };

  void routes();
  std::shared_ptr<DemoFridge> demo_fridge(const FridgeId& id);
  void refresh_leds(const FridgeId& id, bool door_open, Millis now);

  FridgeService& service_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex demo_mu_;
  std::map<FridgeId, std::shared_ptr<DemoFridge>> demo_;
};

}  // namespace coldbench::service
