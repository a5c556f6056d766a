#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hyb/ast.hpp"
#include "hyb/linear_dynamics.hpp"

namespace hyb {

struct GenConfig {
  int max_depth = 3;
  std::size_t var_count = 2;  // at most 3
  double max_duration = 4.0;
  double max_coeff = 2.0;
  double loop_probability = 0.2;
  std::uint64_t seed = 0;
};

/// Well-formed random program over variables x, y, z (the first var_count of them).
/// Every loop body ends in a differential statement of duration >= 0.25.
Program gen_program(const GenConfig& cfg);
Program gen_program(const GenConfig& cfg, std::mt19937_64& rng);

/// Random environment with small integer values.
Env gen_env(const VariableSet& vars, std::mt19937_64& rng);

/// Programs one reduction smaller than p: a subterm in place of p, or p with one child shrunk.
std::vector<ProgPtr> shrink_candidates(const ProgPtr& p);

/// Greedily shrinks p while `still_fails` holds.
ProgPtr shrink(ProgPtr p, const std::function<bool(const ProgPtr&)>& still_fails);

struct Discrepancy {
  std::string program;
  std::vector<std::string> variables;
  Env env;
  double t = 0.0;
  std::uint64_t fuel = 0;
  std::string small;
  std::string big;
  std::string den;
  std::string component;

  std::string to_json_line() const;
};

struct EquivalenceOptions {
  std::uint64_t fuel = 100'000;
  double rel_tolerance = 1e-9;
  double guard_tolerance = 0.0;
};

/// Runs the three semantics and compares them case by case; nullopt when they agree.
std::optional<Discrepancy> check_equivalence(const Program& p, const Env& env, double t,
                                             const EquivalenceOptions& opts = {});

/// Query times for p: 0, durations at which a pilot run crosses statement boundaries, and uniform samples.
std::vector<double> interesting_times(const Program& p, const Env& env, std::mt19937_64& rng, double t_max = 12.0);

// ---- algebraic law suites ----------------------------------------------------

enum class Mutation {
  none,
  concat_drops_segment,  // trajectory monoid
  kleisli_drops_prefix,  // monad
  action_wrong_side,     // monoid module
  iota_last_point,       // iota
  tau_keeps_converged,   // tau
  tau_filters_right,     // joint laws
  theta_drops_endpoint,  // theta
  elgot_drops_prefix,    // elgot
};

struct LawResult {
  std::string suite;
  std::string law;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::string first_failure;
};

struct LawReport {
  std::vector<LawResult> laws;
  /// Cases per branch of the tau and theta case analyses.
  std::vector<std::pair<std::string, std::uint64_t>> branches;

  bool all_passed() const;
  std::uint64_t failures(const std::string& suite) const;
};

LawReport run_law_suites(std::uint64_t seed, std::uint64_t cases, Mutation mutation = Mutation::none);

/// The suite a mutant is expected to break.
std::string mutation_suite(Mutation m);
std::string mutation_name(Mutation m);

}  // namespace hyb
