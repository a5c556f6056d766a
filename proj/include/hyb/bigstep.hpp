#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <variant>

#include "hyb/ast.hpp"
#include "hyb/linear_dynamics.hpp"

namespace hyb {

struct StopAt {
  Env env;
};
struct SkipAt {
  Env env;
  double consumed = 0.0;
};
struct BigFuelExhausted {
  bool timeout = false;
};

using BigResult = std::variant<StopAt, SkipAt, BigFuelExhausted>;

struct BigOptions {
  /// One unit per atomic statement, conditional and loop-guard evaluation.
  std::uint64_t fuel = 1'000'000;
  double guard_tolerance = 0.0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Stack depth is bounded by the nesting depth of the program, independent of fuel.
BigResult evaluate(const ProgPtr& p, const Env& env, double t, const BigOptions& opts = {});

}  // namespace hyb
