#include "hyb/smallstep.hpp"

#include <cmath>

#include "hyb/overloaded.hpp"

namespace hyb {

std::string_view rule_name(Rule r) {
  static constexpr std::string_view names[] = {"asg",     "diff-stop", "diff-skip", "if-true",  "if-false",
                                                "wh-true", "wh-false",  "seq-stop",  "seq-skip", "seq"};
  return names[static_cast<std::size_t>(r)];
}

NegativeDuration::NegativeDuration(double duration, SourceSpan span)
    : std::domain_error("differential statement with negative duration " + format_number(duration) +
                        (span.known() ? " at " + std::to_string(span.line) + ":" + std::to_string(span.column) : "")),
      span_(span) {}

namespace {

// p ; w with p's sequence spine re-associated to the right.
ProgPtr unfold(const ProgPtr& body, const ProgPtr& loop) {
  if (const auto* s = std::get_if<Seq>(&body->node)) {
    return make_seq(s->first, unfold(s->second, loop), loop->span);
  }
  return make_seq(body, loop, loop->span);
}

struct Axiom {
  Rule rule;
  Code code;
  Env env;
  double t;
};

void check_config(const Config& c) {
  if (c.t < 0.0 || std::isnan(c.t)) throw std::invalid_argument("configuration with negative time");
  if (!std::holds_alternative<ProgPtr>(c.code)) {
    throw std::invalid_argument("no rule applies to a terminal configuration");
  }
}

Axiom axiom(const ProgPtr& self, const Env& env, double t, const EvalOptions& opts) {
  return std::visit(
      overloaded{
          [&](const At& a) -> Axiom {
            if (const auto* as = std::get_if<Assign>(&a.atomic)) {
              return {Rule::asg, Skip{}, env.updated(as->var, eval_lterm(*as->value, env)), t};
            }
            const auto& d = std::get<DiffFor>(a.atomic);
            const double dur = eval_lterm(*d.duration, env);
            if (dur < 0.0 || std::isnan(dur)) throw NegativeDuration(dur, self->span);
            const FlowFn flow(compile_system(d.equations, env.size()), env);
            if (t < dur) return {Rule::diff_stop, Stop{}, flow.at(t), 0.0};
            return {Rule::diff_skip, Skip{}, flow.at(dur), t - dur};
          },
          [&](const Ite& i) -> Axiom {
            if (eval_bexpr(*i.cond, env, opts.guard_tolerance)) return {Rule::if_true, i.then_branch, env, t};
            return {Rule::if_false, i.else_branch, env, t};
          },
          [&](const While& w) -> Axiom {
            if (eval_bexpr(*w.cond, env, opts.guard_tolerance)) return {Rule::wh_true, unfold(w.body, self), env, t};
            return {Rule::wh_false, Skip{}, env, t};
          },
          [](const Seq&) -> Axiom { throw std::logic_error("axiom on a sequence"); },
      },
      self->node);
}

}  // namespace

Step step(const Config& c, const EvalOptions& opts) {
  check_config(c);
  std::vector<const Seq*> spine;
  ProgPtr cur = std::get<ProgPtr>(c.code);
  while (const auto* s = std::get_if<Seq>(&cur->node)) {
    spine.push_back(s);
    cur = s->first;
  }
  Axiom ax = axiom(cur, c.env, c.t, opts);
  Step out;
  out.redex = cur->span;
  out.rules.push_back(ax.rule);
  Code code = std::move(ax.code);
  for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
    const Seq& s = **it;
    if (std::holds_alternative<Stop>(code)) {
      out.rules.push_back(Rule::seq_stop);
    } else if (std::holds_alternative<Skip>(code)) {
      out.rules.push_back(Rule::seq_skip);
      code = s.second;
    } else {
      out.rules.push_back(Rule::seq);
      const ProgPtr& first = std::get<ProgPtr>(code);
      code = make_seq(first, s.second, SourceSpan{first->span.line, first->span.column, s.second->span.end_line,
                                                  s.second->span.end_column});
    }
  }
  out.next = Config{std::move(code), std::move(ax.env), ax.t};
  return out;
}

namespace {

enum class Kind { prog, skip, stop };

// Every (rule, result kind) pair whose premises hold, without using step's case order.
std::vector<std::pair<Rule, Kind>> candidates(const Prog& p, const Env& env, double t, const EvalOptions& opts) {
  std::vector<std::pair<Rule, Kind>> out;
  std::visit(overloaded{
                 [&](const At& a) {
                   if (std::holds_alternative<Assign>(a.atomic)) {
                     out.emplace_back(Rule::asg, Kind::skip);
                     return;
                   }
                   const double dur = eval_lterm(*std::get<DiffFor>(a.atomic).duration, env);
                   if (t < dur) out.emplace_back(Rule::diff_stop, Kind::stop);
                   if (t >= dur) out.emplace_back(Rule::diff_skip, Kind::skip);
                 },
                 [&](const Ite& i) {
                   const bool b = eval_bexpr(*i.cond, env, opts.guard_tolerance);
                   if (b) out.emplace_back(Rule::if_true, Kind::prog);
                   if (!b) out.emplace_back(Rule::if_false, Kind::prog);
                 },
                 [&](const While& w) {
                   const bool b = eval_bexpr(*w.cond, env, opts.guard_tolerance);
                   if (b) out.emplace_back(Rule::wh_true, Kind::prog);
                   if (!b) out.emplace_back(Rule::wh_false, Kind::skip);
                 },
                 [&](const Seq& s) {
                   for (const auto& [r, k] : candidates(*s.first, env, t, opts)) {
                     (void)r;
                     if (k == Kind::stop) out.emplace_back(Rule::seq_stop, Kind::stop);
                     if (k == Kind::skip) out.emplace_back(Rule::seq_skip, Kind::prog);
                     if (k == Kind::prog) out.emplace_back(Rule::seq, Kind::prog);
                   }
                 },
             },
             p.node);
  return out;
}

}  // namespace

std::vector<Rule> applicable_rules(const Config& c, const EvalOptions& opts) {
  std::vector<Rule> out;
  if (const auto* p = std::get_if<ProgPtr>(&c.code)) {
    for (const auto& [r, k] : candidates(**p, c.env, c.t, opts)) out.push_back(r);
  }
  return out;
}

RunResult run(const ProgPtr& p, const Env& env, double t, const RunOptions& opts) {
  if (t < 0.0 || std::isnan(t)) throw std::invalid_argument("evaluation time must be non-negative");
  RunResult result{FuelExhausted{}, {}};
  Config c{p, env, t};
  const EvalOptions eopts{opts.guard_tolerance};
  for (std::uint64_t used = 0; used < opts.fuel; ++used) {
    if (opts.deadline && (used & 1023) == 0 && std::chrono::steady_clock::now() > *opts.deadline) {
      result.outcome = FuelExhausted{true};
      return result;
    }
    Step s = step(c, eopts);
    auto& tr = result.trace;
    ++tr.total_steps;
    for (Rule r : s.rules) ++tr.rule_counts[static_cast<std::size_t>(r)];
    if (opts.record_trace && opts.trace_window > 0) {
      if (tr.entries.size() == opts.trace_window) {
        tr.entries.pop_front();
        ++tr.dropped;
      }
      tr.entries.push_back(TraceEntry{s.rules, c, s.next, s.redex});
    } else {
      ++tr.dropped;
    }
    c = std::move(s.next);
    if (std::holds_alternative<Stop>(c.code)) {
      result.outcome = AtTime{std::move(c.env)};
      return result;
    }
    if (std::holds_alternative<Skip>(c.code)) {
      result.outcome = Terminated{std::move(c.env), t - c.t};
      return result;
    }
  }
  return result;
}

}  // namespace hyb
