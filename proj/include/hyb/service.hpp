#pragma once

#include <atomic>
#include <memory>
#include <string>

#include "hyb/api.hpp"

namespace httplib {
class Server;
}

namespace hyb {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin;
  /// Requests evaluated at once; further concurrent requests get 429.
  std::size_t max_inflight = 8;
  api::Limits limits;
};

class Service {
 public:
  explicit Service(ServiceConfig cfg);
  ~Service();

  /// Binds and serves until stop(). Returns false if the address cannot be bound.
  bool listen();
  /// Binds to an ephemeral port on cfg.host and returns it, or -1.
  int bind_any_port();
  /// Serves on a socket bound by bind_any_port.
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  ServiceConfig cfg_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<std::size_t> inflight_{0};
};

}  // namespace hyb
