#pragma once

// Request handling shared by the HTTP service and the command-line tool.
// Handlers are pure: the same request always produces the same bytes.

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace hyb::api {

struct Limits {
  std::chrono::milliseconds timeout{5000};
  std::uint64_t default_fuel = 1'000'000;
};

struct Response {
  int status = 200;
  std::string body;
};

Response handle_parse(std::string_view body, const Limits& limits = {});
Response handle_eval(std::string_view body, const Limits& limits = {});
Response handle_trace(std::string_view body, const Limits& limits = {});
Response handle_step(std::string_view body, const Limits& limits = {});

/// Dispatches on "/parse", "/eval", "/trace", "/step"; 404 otherwise.
Response handle(std::string_view path, std::string_view body, const Limits& limits = {});

}  // namespace hyb::api
