#include "hyb/bigstep.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hyb/smallstep.hpp"

namespace hyb {

BigResult evaluate(const ProgPtr& p, const Env& env0, double t, const BigOptions& opts) {
  if (t < 0.0 || std::isnan(t)) throw std::invalid_argument("evaluation time must be non-negative");
  Env env = env0;
  double remaining = t;
  std::uint64_t fuel = opts.fuel;
  // Pending right components of (seq-skip) and re-entries of (wh-true).
  std::vector<const Prog*> rest;
  const Prog* cur = p.get();
  std::uint64_t ticks = 0;

  auto spend = [&]() {
    if (fuel == 0) return false;
    --fuel;
    return true;
  };

  for (;;) {
    if (const auto* s = std::get_if<Seq>(&cur->node)) {
      rest.push_back(s->second.get());
      cur = s->first.get();
      continue;
    }
    if (!spend()) return BigFuelExhausted{};
    if (opts.deadline && (++ticks & 1023) == 0 && std::chrono::steady_clock::now() > *opts.deadline) {
      return BigFuelExhausted{true};
    }
    if (const auto* a = std::get_if<At>(&cur->node)) {
      if (const auto* as = std::get_if<Assign>(&a->atomic)) {
        env = env.updated(as->var, eval_lterm(*as->value, env));
      } else {
        const auto& d = std::get<DiffFor>(a->atomic);
        const double dur = eval_lterm(*d.duration, env);
        if (dur < 0.0 || std::isnan(dur)) throw NegativeDuration(dur, cur->span);
        const FlowFn flow(compile_system(d.equations, env.size()), env);
        if (remaining < dur) return StopAt{flow.at(remaining)};
        env = flow.at(dur);
        remaining = remaining - dur;
      }
    } else if (const auto* i = std::get_if<Ite>(&cur->node)) {
      cur = eval_bexpr(*i->cond, env, opts.guard_tolerance) ? i->then_branch.get() : i->else_branch.get();
      continue;
    } else if (const auto* w = std::get_if<While>(&cur->node)) {
      if (eval_bexpr(*w->cond, env, opts.guard_tolerance)) {
        rest.push_back(cur);
        cur = w->body.get();
        continue;
      }
    }
    // The current statement evaluated to skip.
    if (rest.empty()) return SkipAt{env, t - remaining};
    cur = rest.back();
    rest.pop_back();
  }
}

}  // namespace hyb
