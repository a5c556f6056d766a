#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hyb/ast.hpp"
#include "hyb/hybrid_monad.hpp"
#include "hyb/linear_dynamics.hpp"

namespace hyb {

using Denotation = HElem<Env, Env>;

/// [[p]](sigma) computed as far as `demand` requires. Fuel: one unit per atomic statement,
/// conditional and loop-guard evaluation, drawn from demand.fuel.
Denotation denote(const ProgPtr& p, const Env& env, const Demand& demand, double guard_tolerance = 0.0);

struct ValueAt {
  Env env;
};
struct TerminatedAt {
  Env env;
  double duration = 0.0;
};
struct DivergedBefore {
  double duration = 0.0;
};
struct DenFuelExhausted {
  bool timeout = false;
};

using DenResult = std::variant<ValueAt, TerminatedAt, DivergedBefore, DenFuelExhausted>;

struct DenOptions {
  std::uint64_t fuel = 1'000'000;
  double guard_tolerance = 0.0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct DenAnswer {
  DenResult result;
  std::uint64_t unfoldings = 0;
  std::uint64_t fuel_used = 0;
};

/// Reads a denotation computed with horizon >= t at time t.
DenResult observe(const Denotation& d, double t);

DenAnswer sem_at(const ProgPtr& p, const Env& env, double t, const DenOptions& opts = {});

enum class Marker { none, terminated, diverged, fuel };

std::string_view marker_name(Marker m);

struct TracePoint {
  double t = 0.0;
  /// Absent for diverged and fuel points.
  std::optional<Env> env;
  Marker marker = Marker::none;
};

struct TraceBoundary {
  Marker kind = Marker::none;
  double t = 0.0;
};

struct Trace {
  std::vector<TracePoint> points;
  std::vector<TraceBoundary> markers;
  std::uint64_t unfoldings = 0;
  bool timeout = false;
};

/// linspace(0, t_max, samples) sampled from one denotation computed up to t_max.
Trace sem_trace(const ProgPtr& p, const Env& env, double t_max, std::size_t samples, const DenOptions& opts = {});

struct UnfoldCheck {
  bool ok = false;
  Env value;
  std::uint64_t unfoldings = 0;
};

/// Evaluates while true { x := x + 1 ; wait 1 } at t and checks that exactly `expected_unfoldings`
/// iterations ran and x was incremented that many times.
UnfoldCheck example_unfold_check(const Env& env, double t = 0.5, std::uint64_t expected_unfoldings = 1);

}  // namespace hyb
