#include "hyb/service.hpp"

#include <httplib.h>

namespace hyb {

Service::Service(ServiceConfig cfg) : cfg_(std::move(cfg)), server_(std::make_unique<httplib::Server>()) {
  const std::size_t workers = cfg_.max_inflight + 2;
  server_->new_task_queue = [workers] { return new httplib::ThreadPool(workers); };

  auto cors = [this](httplib::Response& res) {
    if (cfg_.cors_origin.empty()) return;
    res.set_header("Access-Control-Allow-Origin", cfg_.cors_origin);
    res.set_header("Access-Control-Allow-Methods", "POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  };

  server_->Options(R"(/.*)", [cors](const httplib::Request&, httplib::Response& res) {
    cors(res);
    res.status = 204;
  });

  for (const char* path : {"/parse", "/eval", "/trace", "/step"}) {
    server_->Post(path, [this, cors, path](const httplib::Request& req, httplib::Response& res) {
      cors(res);
      if (inflight_.fetch_add(1) >= cfg_.max_inflight) {
        inflight_.fetch_sub(1);
        res.status = 429;
        res.set_content(R"({"error":"too many requests"})", "application/json");
        return;
      }
      const api::Response r = api::handle(path, req.body, cfg_.limits);
      inflight_.fetch_sub(1);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    });
  }
}

Service::~Service() = default;

bool Service::listen() { return server_->listen(cfg_.host, cfg_.port); }

int Service::bind_any_port() { return server_->bind_to_any_port(cfg_.host); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::stop() { server_->stop(); }

void Service::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace hyb
