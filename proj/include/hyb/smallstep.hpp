#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "hyb/ast.hpp"
#include "hyb/linear_dynamics.hpp"

namespace hyb {

struct Skip {};
struct Stop {};

using Code = std::variant<ProgPtr, Skip, Stop>;

struct Config {
  Code code;
  Env env;
  double t = 0.0;

  bool terminal() const { return !std::holds_alternative<ProgPtr>(code); }
};

enum class Rule : std::uint8_t { asg, diff_stop, diff_skip, if_true, if_false, wh_true, wh_false, seq_stop, seq_skip, seq };
inline constexpr std::size_t kRuleCount = 10;

std::string_view rule_name(Rule r);

class NegativeDuration : public std::domain_error {
 public:
  NegativeDuration(double duration, SourceSpan span);
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

struct EvalOptions {
  double guard_tolerance = 0.0;
};

struct Step {
  /// Rules of the derivation, innermost first: the axiom, then one seq rule per enclosing sequence.
  std::vector<Rule> rules;
  Config next;
  /// Span of the statement the axiom fired on.
  SourceSpan redex;
};

/// One reduction step. Throws std::invalid_argument on a terminal config or a stop config with t > 0.
Step step(const Config& c, const EvalOptions& opts = {});

/// The rules whose side conditions hold for c, each checked independently of the others.
std::vector<Rule> applicable_rules(const Config& c, const EvalOptions& opts = {});

struct TraceEntry {
  std::vector<Rule> rules;
  Config before;
  Config after;
  SourceSpan redex;
};

struct StepTrace {
  /// The most recent entries, at most the retention window.
  std::deque<TraceEntry> entries;
  std::uint64_t total_steps = 0;
  std::uint64_t dropped = 0;
  std::array<std::uint64_t, kRuleCount> rule_counts{};
};

struct AtTime {
  Env env;
};
struct Terminated {
  Env env;
  double duration = 0.0;
};
struct FuelExhausted {
  bool timeout = false;
};

using Outcome = std::variant<AtTime, Terminated, FuelExhausted>;

struct RunOptions {
  std::uint64_t fuel = 1'000'000;
  std::size_t trace_window = 10'000;
  bool record_trace = true;
  double guard_tolerance = 0.0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct RunResult {
  Outcome outcome;
  StepTrace trace;
};

/// Iterates step at most opts.fuel times. Throws std::invalid_argument if t < 0.
RunResult run(const ProgPtr& p, const Env& env, double t, const RunOptions& opts = {});

}  // namespace hyb
