#pragma once

// REPL session and the batch-mode helpers behind the hyb command.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "hyb/ast.hpp"
#include "hyb/denotational.hpp"

namespace hyb::cli {

enum class Semantics { small, big, den };

std::optional<Semantics> semantics_from(const std::string& name);
const char* semantics_name(Semantics s);

// Exit statuses of `hyb run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFuel = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitDiverged = 4;

struct EvalSummary {
  std::string line;  // "value v=6.5", "terminated x=5 duration=0", "fuel", "diverged duration=2"
  int exit_code = kExitOk;
};

EvalSummary evaluate_at(const Program& p, double t, Semantics sem, std::uint64_t fuel, double guard_tolerance);

/// Writes "t,var1,...,varn,marker" followed by one row per point.
void write_csv(std::ostream& out, const Trace& trace, const VariableSet& vars);

/// Exit status for a sampled trace: fuel or divergence markers win over success.
int trace_exit_code(const Trace& trace);

class Session {
 public:
  Session(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  /// Runs one command line; returns false after :quit.
  bool execute(const std::string& line);
  /// Reads commands until end of input or :quit.
  void run(std::istream& in, bool prompt);

  bool loaded() const { return program_.has_value(); }
  std::uint64_t fuel() const { return fuel_; }
  double guard_tolerance() const { return guard_tolerance_; }
  Semantics semantics() const { return semantics_; }

 private:
  void load(const std::string& file);
  void eval(double t);
  void trace(double t_max, std::size_t samples, const std::string& file);
  void steps(double t, std::size_t max_steps);
  void help();

  std::ostream& out_;
  std::ostream& err_;
  std::optional<Program> program_;
  std::string file_;
  std::uint64_t fuel_ = 1'000'000;
  double guard_tolerance_ = 0.0;
  Semantics semantics_ = Semantics::small;
};

}  // namespace hyb::cli
