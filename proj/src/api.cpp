#include "hyb/api.hpp"

#include <cmath>
#include <json.hpp>
#include <optional>

#include "hyb/bigstep.hpp"
#include "hyb/denotational.hpp"
#include "hyb/overloaded.hpp"
#include "hyb/parser.hpp"
#include "hyb/smallstep.hpp"

namespace hyb::api {

namespace {

using json = nlohmann::ordered_json;

struct ApiError {
  int status;
  std::string message;
  json extra = json::object();
};

Response reply(int status, const json& j) { return Response{status, j.dump()}; }

Response error_reply(const ApiError& e) {
  json j = {{"error", e.message}};
  for (auto& [k, v] : e.extra.items()) j[k] = v;
  return reply(e.status, j);
}

json parse_body(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw ApiError{400, "malformed JSON"};
  if (!j.is_object()) throw ApiError{400, "request body must be a JSON object"};
  return j;
}

std::string get_source(const json& j) {
  auto it = j.find("source");
  if (it == j.end() || !it->is_string()) throw ApiError{422, "missing string field 'source'"};
  return it->get<std::string>();
}

double get_number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    throw ApiError{422, std::string("missing numeric field '") + key + "'"};
  }
  if (!it->is_number()) throw ApiError{422, std::string("field '") + key + "' must be a number"};
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ApiError{422, std::string("field '") + key + "' must be finite"};
  return v;
}

std::uint64_t get_count(const json& j, const char* key, std::uint64_t fallback, std::uint64_t lo, std::uint64_t hi) {
  const double v = get_number(j, key, static_cast<double>(fallback));
  if (v != std::floor(v) || v < static_cast<double>(lo) || v > static_cast<double>(hi)) {
    throw ApiError{422, std::string("field '") + key + "' must be an integer in [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]"};
  }
  return static_cast<std::uint64_t>(v);
}

json diagnostic_json(const ParseError& e) {
  json d = {{"message", e.message()}, {"line", e.line()}, {"column", e.column()}};
  d["expected"] = e.expected();
  return d;
}

Program get_program(const json& j) {
  try {
    return parse(get_source(j));
  } catch (const ParseError& e) {
    throw ApiError{422, "parse error", json{{"diagnostics", json::array({diagnostic_json(e)})}}};
  }
}

json env_json(const Env& env, const VariableSet& vars) {
  json out = json::object();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (std::isfinite(env[i]))
      out[vars.names()[i]] = env[i];
    else
      out[vars.names()[i]] = nullptr;
  }
  return out;
}

json span_json(const SourceSpan& s) {
  return {{"line", s.line}, {"column", s.column}, {"end_line", s.end_line}, {"end_column", s.end_column}};
}

std::chrono::steady_clock::time_point deadline_of(const Limits& limits) {
  return std::chrono::steady_clock::now() + limits.timeout;
}

template <class F>
Response guarded(std::string_view body, F&& f) {
  try {
    return reply(200, f(parse_body(body)));
  } catch (const ApiError& e) {
    return error_reply(e);
  } catch (const NegativeDuration& e) {
    return error_reply(ApiError{422, e.what()});
  } catch (const std::exception& e) {
    return error_reply(ApiError{500, e.what()});
  }
}

json fuel_json(bool timeout) {
  json out = {{"status", "fuel"}, {"env", nullptr}};
  if (timeout) out["timeout"] = true;
  return out;
}

}  // namespace

Response handle_parse(std::string_view body, const Limits&) {
  return guarded(body, [](const json& j) {
    const std::string src = get_source(j);
    try {
      const Program p = parse(src);
      return json{{"ok", true}, {"variables", p.vars.names()}, {"diagnostics", json::array()}};
    } catch (const ParseError& e) {
      return json{{"ok", false}, {"variables", json::array()}, {"diagnostics", json::array({diagnostic_json(e)})}};
    }
  });
}

Response handle_eval(std::string_view body, const Limits& limits) {
  return guarded(body, [&](const json& j) {
    const Program prog = get_program(j);
    const double t = get_number(j, "t");
    if (t < 0.0) throw ApiError{422, "'t' must be non-negative"};
    const std::uint64_t fuel = get_count(j, "fuel", limits.default_fuel, 1, 1'000'000'000);
    const double tol = get_number(j, "guard_tolerance", 0.0);
    if (tol < 0.0) throw ApiError{422, "'guard_tolerance' must be non-negative"};
    std::string sem = "small";
    if (auto it = j.find("semantics"); it != j.end()) {
      if (!it->is_string()) throw ApiError{422, "'semantics' must be a string"};
      sem = it->get<std::string>();
    }
    const Env env0(prog.vars.size());
    const auto deadline = deadline_of(limits);
    auto value = [&](const Env& e) { return json{{"status", "value"}, {"env", env_json(e, prog.vars)}}; };
    auto terminated = [&](const Env& e, double d) {
      return json{{"status", "terminated"}, {"env", env_json(e, prog.vars)}, {"duration", d}};
    };
    if (sem == "small") {
      RunOptions o;
      o.fuel = fuel;
      o.guard_tolerance = tol;
      o.deadline = deadline;
      o.record_trace = false;
      return std::visit(overloaded{
                            [&](const AtTime& a) { return value(a.env); },
                            [&](const Terminated& r) { return terminated(r.env, r.duration); },
                            [&](const FuelExhausted& f) { return fuel_json(f.timeout); },
                        },
                        run(prog.root, env0, t, o).outcome);
    }
    if (sem == "big") {
      return std::visit(overloaded{
                            [&](const StopAt& a) { return value(a.env); },
                            [&](const SkipAt& r) { return terminated(r.env, r.consumed); },
                            [&](const BigFuelExhausted& f) { return fuel_json(f.timeout); },
                        },
                        evaluate(prog.root, env0, t, BigOptions{fuel, tol, deadline}));
    }
    if (sem == "den") {
      return std::visit(overloaded{
                            [&](const ValueAt& a) { return value(a.env); },
                            [&](const TerminatedAt& r) { return terminated(r.env, r.duration); },
                            [&](const DivergedBefore& d) {
                              return json{{"status", "diverged"}, {"env", nullptr}, {"duration", d.duration}};
                            },
                            [&](const DenFuelExhausted& f) { return fuel_json(f.timeout); },
                        },
                        sem_at(prog.root, env0, t, DenOptions{fuel, tol, deadline}).result);
    }
    throw ApiError{422, "'semantics' must be one of small, big, den"};
  });
}

Response handle_trace(std::string_view body, const Limits& limits) {
  return guarded(body, [&](const json& j) {
    const Program prog = get_program(j);
    const double t_max = get_number(j, "t_max");
    if (!(t_max > 0.0)) throw ApiError{422, "'t_max' must be positive"};
    const std::uint64_t samples = get_count(j, "samples", 200, 2, 100'000);
    const std::uint64_t fuel = get_count(j, "fuel", limits.default_fuel, 1, 1'000'000'000);
    const double tol = get_number(j, "guard_tolerance", 0.0);
    if (tol < 0.0) throw ApiError{422, "'guard_tolerance' must be non-negative"};
    const Trace tr = sem_trace(prog.root, Env(prog.vars.size()), t_max, samples, DenOptions{fuel, tol, deadline_of(limits)});
    json points = json::array();
    for (const auto& p : tr.points) {
      json pt = {{"t", p.t}};
      if (p.env) pt["env"] = env_json(*p.env, prog.vars);
      if (p.marker != Marker::none) pt["marker"] = marker_name(p.marker);
      points.push_back(std::move(pt));
    }
    json markers = json::array();
    for (const auto& m : tr.markers) markers.push_back({{"kind", marker_name(m.kind)}, {"t", m.t}});
    json out = {{"variables", prog.vars.names()}, {"points", std::move(points)}, {"markers", std::move(markers)}};
    if (tr.timeout) out["timeout"] = true;
    return out;
  });
}

Response handle_step(std::string_view body, const Limits& limits) {
  return guarded(body, [&](const json& j) {
    const Program prog = get_program(j);
    const double t = get_number(j, "t");
    if (t < 0.0) throw ApiError{422, "'t' must be non-negative"};
    const std::uint64_t max_steps = get_count(j, "max_steps", 100, 1, 10'000);
    const double tol = get_number(j, "guard_tolerance", 0.0);
    if (tol < 0.0) throw ApiError{422, "'guard_tolerance' must be non-negative"};
    const auto deadline = deadline_of(limits);
    Config c{prog.root, Env(prog.vars.size()), t};
    json steps = json::array();
    bool timeout = false;
    for (std::uint64_t i = 0; i < max_steps && !c.terminal(); ++i) {
      if (std::chrono::steady_clock::now() > deadline) {
        timeout = true;
        break;
      }
      Step s = step(c, EvalOptions{tol});
      json rules = json::array();
      for (Rule r : s.rules) rules.push_back(rule_name(r));
      steps.push_back({{"rule", rule_name(s.rules.back())},
                       {"rules", std::move(rules)},
                       {"code_span", span_json(s.redex)},
                       {"env", env_json(s.next.env, prog.vars)},
                       {"t", s.next.t}});
      c = std::move(s.next);
    }
    std::string code = std::holds_alternative<Stop>(c.code)   ? "stop"
                       : std::holds_alternative<Skip>(c.code) ? "skip"
                                                              : pretty_print(*std::get<ProgPtr>(c.code));
    json out = {{"steps", std::move(steps)},
                {"terminal", c.terminal()},
                {"final", {{"code", code}, {"env", env_json(c.env, prog.vars)}, {"t", c.t}}}};
    if (timeout) out["timeout"] = true;
    return out;
  });
}

Response handle(std::string_view path, std::string_view body, const Limits& limits) {
  if (path == "/parse") return handle_parse(body, limits);
  if (path == "/eval") return handle_eval(body, limits);
  if (path == "/trace") return handle_trace(body, limits);
  if (path == "/step") return handle_step(body, limits);
  return Response{404, json{{"error", "not found"}}.dump()};
}

}  // namespace hyb::api
