#include "hyb/harness.hpp"

#include <cmath>
#include <json.hpp>

#include "hyb/bigstep.hpp"
#include "hyb/denotational.hpp"
#include "hyb/overloaded.hpp"
#include "hyb/smallstep.hpp"

namespace hyb {

namespace {

class Generator {
 public:
  Generator(const GenConfig& cfg, std::mt19937_64& rng, const VariableSet& vars) : cfg_(cfg), rng_(rng), vars_(vars) {}

  ProgPtr stmt(int depth) {
    if (depth <= 0) return atomic();
    const double r = unit();
    if (r < cfg_.loop_probability) return loop(depth);
    if (r < cfg_.loop_probability + 0.2) return make_ite(guard(1), stmt(depth - 1), stmt(depth - 1));
    if (r < cfg_.loop_probability + 0.45) {
      std::vector<ProgPtr> parts;
      const int n = integer(2, 3);
      for (int i = 0; i < n; ++i) append_flat(parts, stmt(depth - 1));
      return make_sequence(parts);
    }
    return atomic();
  }

 private:
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  /// Multiple of `step` in [lo, hi].
  double grid(double lo, double hi, double step) {
    const int k = integer(static_cast<int>(std::ceil(lo / step)), static_cast<int>(std::floor(hi / step)));
    return k * step;
  }
  Var var() { return vars_.at(static_cast<std::size_t>(integer(0, static_cast<int>(vars_.size()) - 1))); }

  static void append_flat(std::vector<ProgPtr>& parts, const ProgPtr& p) {
    if (const auto* s = std::get_if<Seq>(&p->node)) {
      append_flat(parts, s->first);
      append_flat(parts, s->second);
    } else {
      parts.push_back(p);
    }
  }

  LTermPtr term() {
    if (unit() < 0.4) return lconst(grid(-cfg_.max_coeff, cfg_.max_coeff, 0.5));
    return lscaled(grid(-cfg_.max_coeff, cfg_.max_coeff, 0.5), var());
  }

  LTermPtr lterm() {
    LTermPtr acc = term();
    const int extra = integer(0, 2);
    for (int i = 0; i < extra; ++i) acc = lsum(acc, term());
    return acc;
  }

  BExprPtr atom() {
    const double r = unit();
    if (r < 0.08) return btrue();
    if (r < 0.12) return bfalse();
    LTermPtr lhs = unit() < 0.7 ? lscaled(1.0, var()) : lterm();
    LTermPtr rhs = lconst(integer(-3, 3));
    return unit() < 0.5 ? bleq(lhs, rhs) : bgeq(lhs, rhs);
  }

  BExprPtr guard(int depth) {
    if (depth <= 0) return atom();
    const double r = unit();
    if (r < 0.15) return band(guard(depth - 1), guard(depth - 1));
    if (r < 0.3) return bor(guard(depth - 1), guard(depth - 1));
    if (r < 0.4) return bnot(guard(depth - 1));
    return atom();
  }

  ProgPtr differential(double min_duration) {
    std::vector<Equation> eqs;
    const bool frozen = unit() < 0.25;
    for (std::size_t i = 0; i < vars_.size(); ++i) eqs.emplace_back(vars_.at(i), frozen ? lconst(0.0) : lterm());
    const double dur = grid(min_duration, cfg_.max_duration, 0.25);
    return make_atomic(DiffFor{std::move(eqs), lconst(dur)});
  }

  ProgPtr atomic() {
    if (unit() < 0.5) return make_atomic(Assign{var(), lterm()});
    return differential(0.0);
  }

  ProgPtr loop(int depth) {
    std::vector<ProgPtr> parts;
    if (unit() < 0.7) append_flat(parts, stmt(depth - 1));
    parts.push_back(differential(0.25));
    return make_while(guard(1), make_sequence(parts));
  }

  const GenConfig& cfg_;
  std::mt19937_64& rng_;
  const VariableSet& vars_;
};

std::string describe(const Outcome& o, const VariableSet& vars) {
  return std::visit(overloaded{
                        [&](const AtTime& a) { return "value " + format_env(a.env, vars); },
                        [&](const Terminated& r) {
                          return "terminated " + format_env(r.env, vars) + " duration=" + format_number(r.duration);
                        },
                        [](const FuelExhausted&) { return std::string("fuel"); },
                    },
                    o);
}

std::string describe(const BigResult& o, const VariableSet& vars) {
  return std::visit(overloaded{
                        [&](const StopAt& a) { return "value " + format_env(a.env, vars); },
                        [&](const SkipAt& r) {
                          return "terminated " + format_env(r.env, vars) + " duration=" + format_number(r.consumed);
                        },
                        [](const BigFuelExhausted&) { return std::string("fuel"); },
                    },
                    o);
}

std::string describe(const DenResult& o, const VariableSet& vars) {
  return std::visit(overloaded{
                        [&](const ValueAt& a) { return "value " + format_env(a.env, vars); },
                        [&](const TerminatedAt& r) {
                          return "terminated " + format_env(r.env, vars) + " duration=" + format_number(r.duration);
                        },
                        [](const DivergedBefore& d) { return "diverged duration=" + format_number(d.duration); },
                        [](const DenFuelExhausted&) { return std::string("fuel"); },
                    },
                    o);
}

// Kind, env and duration of an outcome in a common form.
struct Flat {
  int kind = 0;  // 0 value, 1 terminated, 2 fuel, 3 diverged
  Env env;
  double duration = 0.0;
};

Flat flatten(const Outcome& o) {
  return std::visit(overloaded{
                        [](const AtTime& a) { return Flat{0, a.env, 0.0}; },
                        [](const Terminated& r) { return Flat{1, r.env, r.duration}; },
                        [](const FuelExhausted&) { return Flat{2, {}, 0.0}; },
                    },
                    o);
}
Flat flatten(const BigResult& o) {
  return std::visit(overloaded{
                        [](const StopAt& a) { return Flat{0, a.env, 0.0}; },
                        [](const SkipAt& r) { return Flat{1, r.env, r.consumed}; },
                        [](const BigFuelExhausted&) { return Flat{2, {}, 0.0}; },
                    },
                    o);
}
Flat flatten(const DenResult& o) {
  return std::visit(overloaded{
                        [](const ValueAt& a) { return Flat{0, a.env, 0.0}; },
                        [](const TerminatedAt& r) { return Flat{1, r.env, r.duration}; },
                        [](const DenFuelExhausted&) { return Flat{2, {}, 0.0}; },
                        [](const DivergedBefore& d) { return Flat{3, {}, d.duration}; },
                    },
                    o);
}

// First differing component, or empty.
std::string compare(const Flat& a, const Flat& b, double rel) {
  if (a.kind != b.kind) return "outcome kind";
  if (a.kind == 2) return "";
  for (std::size_t i = 0; i < a.env.size(); ++i) {
    if (!close_values(a.env[i], b.env[i], rel)) return "env[" + std::to_string(i) + "]";
  }
  if (a.kind == 1 && !close_values(a.duration, b.duration, rel)) return "duration";
  return "";
}

}  // namespace

Program gen_program(const GenConfig& cfg, std::mt19937_64& rng) {
  static const char* names[] = {"x", "y", "z"};
  VariableSet vars;
  const std::size_t n = std::min<std::size_t>(std::max<std::size_t>(cfg.var_count, 1), 3);
  for (std::size_t i = 0; i < n; ++i) vars.intern(names[i]);
  Generator g(cfg, rng, vars);
  ProgPtr root = g.stmt(cfg.max_depth);
  return Program{root, vars};
}

Program gen_program(const GenConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return gen_program(cfg, rng);
}

Env gen_env(const VariableSet& vars, std::mt19937_64& rng) {
  Env env(vars.size());
  std::uniform_int_distribution<int> d(-3, 3);
  for (std::size_t i = 0; i < vars.size(); ++i) env[i] = d(rng);
  return env;
}

std::vector<ProgPtr> shrink_candidates(const ProgPtr& p) {
  std::vector<ProgPtr> out;
  std::visit(overloaded{
                 [](const At&) {},
                 [&](const Seq& s) {
                   out.push_back(s.first);
                   out.push_back(s.second);
                   for (auto& c : shrink_candidates(s.first)) out.push_back(make_seq(c, s.second, p->span));
                   for (auto& c : shrink_candidates(s.second)) out.push_back(make_seq(s.first, c, p->span));
                 },
                 [&](const Ite& i) {
                   out.push_back(i.then_branch);
                   out.push_back(i.else_branch);
                   for (auto& c : shrink_candidates(i.then_branch))
                     out.push_back(make_ite(i.cond, c, i.else_branch, p->span));
                   for (auto& c : shrink_candidates(i.else_branch))
                     out.push_back(make_ite(i.cond, i.then_branch, c, p->span));
                 },
                 [&](const While& w) {
                   out.push_back(w.body);
                   for (auto& c : shrink_candidates(w.body)) out.push_back(make_while(w.cond, c, p->span));
                 },
             },
             p->node);
  return out;
}

ProgPtr shrink(ProgPtr p, const std::function<bool(const ProgPtr&)>& still_fails) {
  for (bool progress = true; progress;) {
    progress = false;
    for (const auto& c : shrink_candidates(p)) {
      if (still_fails(c)) {
        p = c;
        progress = true;
        break;
      }
    }
  }
  return p;
}

std::string Discrepancy::to_json_line() const {
  nlohmann::ordered_json j;
  j["program"] = program;
  j["variables"] = variables;
  j["env"] = env.values();
  j["t"] = t;
  j["fuel"] = fuel;
  j["small"] = small;
  j["big"] = big;
  j["den"] = den;
  j["component"] = component;
  return j.dump();
}

std::optional<Discrepancy> check_equivalence(const Program& p, const Env& env, double t,
                                             const EquivalenceOptions& opts) {
  RunOptions ro;
  ro.fuel = opts.fuel;
  ro.record_trace = false;
  ro.guard_tolerance = opts.guard_tolerance;
  const Outcome small = run(p.root, env, t, ro).outcome;
  const BigResult big = evaluate(p.root, env, t, BigOptions{opts.fuel, opts.guard_tolerance, std::nullopt});
  const DenResult den = sem_at(p.root, env, t, DenOptions{opts.fuel, opts.guard_tolerance, std::nullopt}).result;

  std::string component;
  if (auto c = compare(flatten(small), flatten(big), opts.rel_tolerance); !c.empty()) component = "small/big " + c;
  if (auto d = compare(flatten(small), flatten(den), opts.rel_tolerance); !d.empty()) {
    component += (component.empty() ? "small/den " : "; small/den ") + d;
  }
  if (component.empty()) return std::nullopt;
  return Discrepancy{pretty_print(*p.root), p.vars.names(), env, t, opts.fuel,
                     describe(small, p.vars), describe(big, p.vars), describe(den, p.vars), component};
}

std::vector<double> interesting_times(const Program& p, const Env& env, std::mt19937_64& rng, double t_max) {
  std::vector<double> out{0.0};
  RunOptions ro;
  ro.fuel = 20'000;
  ro.trace_window = 20'000;
  const RunResult pilot = run(p.root, env, t_max, ro);
  for (const auto& e : pilot.trace.entries) {
    if (e.rules.front() == Rule::diff_skip) out.push_back(t_max - e.after.t);
  }
  std::uniform_real_distribution<double> u(0.0, t_max);
  for (int i = 0; i < 4; ++i) out.push_back(u(rng));
  return out;
}

}  // namespace hyb
