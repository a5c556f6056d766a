#include "hyb/denotational.hpp"

#include <cmath>
#include <stdexcept>

#include "hyb/overloaded.hpp"
#include "hyb/parser.hpp"
#include "hyb/smallstep.hpp"

namespace hyb {

namespace {

using LoopStep = HElem<Env, Either<Env, Env>>;

Denotation out_of_fuel(const Demand& d) {
  return Divergent<Env>{{}, Closure::open, std::nullopt,
                        d.fuel && d.fuel->timed_out() ? DivCause::timeout : DivCause::fuel};
}

Denotation denote_atomic(const Prog& self, const Atomic& a, const Env& env) {
  if (const auto* as = std::get_if<Assign>(&a)) {
    return unit<Env>(env.updated(as->var, eval_lterm(*as->value, env)));
  }
  const auto& d = std::get<DiffFor>(a);
  const double dur = eval_lterm(*d.duration, env);
  if (dur < 0.0 || std::isnan(dur)) throw NegativeDuration(dur, self.span);
  LinSys sys = compile_system(d.equations, env.size());
  Trajectory<Env> tr;
  if (sys.zero) {
    tr.append(Segment<Env>{dur, std::make_shared<ConstLaw<Env>>(env)});
    return Converged<Env, Env>{std::move(tr), env};
  }
  FlowFn flow(std::move(sys), env);
  Env end = flow.at(dur);
  tr.append(Segment<Env>{dur, std::make_shared<FlowLaw>(std::move(flow))});
  return Converged<Env, Env>{std::move(tr), std::move(end)};
}

}  // namespace

Denotation denote(const ProgPtr& p, const Env& env, const Demand& demand, double tol) {
  return std::visit(
      overloaded{
          [&](const At& a) -> Denotation {
            if (!demand.consume()) return out_of_fuel(demand);
            return denote_atomic(*p, a.atomic, env);
          },
          [&](const Seq& s) -> Denotation {
            ProgPtr q = s.second;
            return bind(denote(s.first, env, demand, tol),
                        [q, tol](const Env& mid, const Demand& d) { return denote(q, mid, d, tol); }, demand);
          },
          [&](const Ite& i) -> Denotation {
            if (!demand.consume()) return out_of_fuel(demand);
            return denote(eval_bexpr(*i.cond, env, tol) ? i.then_branch : i.else_branch, env, demand, tol);
          },
          [&](const While& w) -> Denotation {
            BExprPtr cond = w.cond;
            ProgPtr body = w.body;
            auto g = [cond, body, tol](const Env& s, const Demand& d) -> LoopStep {
              if (!eval_bexpr(*cond, s, tol)) return unit<Env>(Either<Env, Env>::left(s));
              return map_value(denote(body, s, d, tol), [](const Env& e) { return Either<Env, Env>::right(e); });
            };
            return elgot<Env>(g, env, demand);
          },
      },
      p->node);
}

DenResult observe(const Denotation& d, double t) {
  const auto& tr = d.trajectory();
  if (tr.covers(t)) return ValueAt{tr.at(t)};
  if (d.pending()) throw std::logic_error("pending denotation does not cover the query time");
  if (const auto* c = d.converged()) return TerminatedAt{c->value, t - *tr.remaining_after(t)};
  const auto& div = *d.divergent();
  if (div.cause != DivCause::semantic) return DenFuelExhausted{div.cause == DivCause::timeout};
  if (div.closure == Closure::closed && div.endpoint && *tr.remaining_after(t) == 0.0) return ValueAt{*div.endpoint};
  return DivergedBefore{tr.total()};
}

DenAnswer sem_at(const ProgPtr& p, const Env& env, double t, const DenOptions& opts) {
  if (t < 0.0 || std::isnan(t)) throw std::invalid_argument("evaluation time must be non-negative");
  FuelMeter meter(opts.fuel, opts.deadline);
  const Denotation d = denote(p, env, Demand{t, &meter}, opts.guard_tolerance);
  return DenAnswer{observe(d, t), meter.unfoldings(), meter.used()};
}

std::string_view marker_name(Marker m) {
  switch (m) {
    case Marker::terminated: return "terminated";
    case Marker::diverged: return "diverged";
    case Marker::fuel: return "fuel";
    default: return "";
  }
}

Trace sem_trace(const ProgPtr& p, const Env& env, double t_max, std::size_t samples, const DenOptions& opts) {
  if (!(t_max > 0.0) || std::isinf(t_max)) throw std::invalid_argument("t_max must be positive and finite");
  if (samples < 2) throw std::invalid_argument("at least two samples are required");
  FuelMeter meter(opts.fuel, opts.deadline);
  const Denotation d = denote(p, env, Demand{t_max, &meter}, opts.guard_tolerance);
  Trace out;
  out.unfoldings = meter.unfoldings();
  out.timeout = meter.timed_out();
  const double end = d.trajectory().total();
  if (d.converged()) out.markers.push_back({Marker::terminated, end});
  if (const auto* div = d.divergent()) {
    out.markers.push_back({div->cause == DivCause::semantic ? Marker::diverged : Marker::fuel, end});
  }
  out.points.reserve(samples);
  const double last = static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = i + 1 == samples ? t_max : t_max * static_cast<double>(i) / last;
    TracePoint pt{t, std::nullopt, Marker::none};
    std::visit(overloaded{
                   [&](const ValueAt& v) { pt.env = v.env; },
                   [&](const TerminatedAt& v) {
                     pt.env = v.env;
                     pt.marker = Marker::terminated;
                   },
                   [&](const DivergedBefore&) { pt.marker = Marker::diverged; },
                   [&](const DenFuelExhausted&) { pt.marker = Marker::fuel; },
               },
               observe(d, t));
    out.points.push_back(std::move(pt));
  }
  return out;
}

UnfoldCheck example_unfold_check(const Env& env, double t, std::uint64_t expected) {
  const Program prog = parse("while true { x := x + 1 ; wait 1 }");
  if (env.size() != 1) throw std::invalid_argument("example_unfold_check expects an environment over {x}");
  const DenAnswer a = sem_at(prog.root, env, t);
  UnfoldCheck out;
  out.unfoldings = a.unfoldings;
  if (const auto* v = std::get_if<ValueAt>(&a.result)) {
    out.value = v->env;
    out.ok = v->env[0] == env[0] + static_cast<double>(expected) && a.unfoldings == expected;
  }
  return out;
}

}  // namespace hyb
