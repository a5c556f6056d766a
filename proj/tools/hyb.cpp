#include <unistd.h>

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyb/api.hpp"
#include "hyb/harness.hpp"
#include "hyb/parser.hpp"
#include "hyb/service.hpp"
#include "session.hpp"

using namespace hyb;
using nlohmann::ordered_json;

namespace {

struct RunArgs {
  std::string file;
  std::optional<double> at;
  std::optional<double> trace;
  std::size_t samples = 200;
  std::string out;
  std::uint64_t fuel = 1'000'000;
  std::string semantics = "small";
  double guard_tolerance = 0.0;
  bool json = false;
};

std::optional<std::string> read_text(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int exit_for_status(const std::string& status) {
  if (status == "fuel") return cli::kExitFuel;
  if (status == "diverged") return cli::kExitDiverged;
  return cli::kExitOk;
}

int run_json(const RunArgs& a, const std::string& source) {
  ordered_json req;
  req["source"] = source;
  std::string path;
  if (a.at) {
    path = "/eval";
    req["t"] = *a.at;
    req["semantics"] = a.semantics;
  } else {
    path = "/trace";
    req["t_max"] = *a.trace;
    req["samples"] = a.samples;
  }
  req["fuel"] = a.fuel;
  req["guard_tolerance"] = a.guard_tolerance;
  const api::Response r = api::handle(path, req.dump());
  std::cout << r.body << '\n';
  if (r.status != 200) {
    const auto j = ordered_json::parse(r.body);
    return j.contains("diagnostics") ? cli::kExitParse : cli::kExitError;
  }
  const auto j = ordered_json::parse(r.body);
  if (a.at) return exit_for_status(j["status"].get<std::string>());
  int code = cli::kExitOk;
  for (const auto& m : j["markers"]) {
    if (m["kind"] == "fuel") return cli::kExitFuel;
    if (m["kind"] == "diverged") code = cli::kExitDiverged;
  }
  return code;
}

int run_batch(const RunArgs& a) {
  const auto source = read_text(a.file);
  if (!source) {
    std::cerr << "cannot open " << a.file << '\n';
    return cli::kExitParse;
  }
  const auto sem = cli::semantics_from(a.semantics);
  if (!sem) {
    std::cerr << "unknown semantics " << a.semantics << '\n';
    return cli::kExitError;
  }
  if (a.at && *a.at < 0) {
    std::cerr << "--at must be non-negative\n";
    return cli::kExitError;
  }
  if (a.trace && !(*a.trace > 0 && a.samples >= 2 && a.samples <= 100'000)) {
    std::cerr << "--trace needs T_MAX > 0 and --samples in [2, 100000]\n";
    return cli::kExitError;
  }
  if (a.json && a.out.empty()) return run_json(a, *source);

  Program p;
  try {
    p = parse(*source);
  } catch (const ParseError& e) {
    if (a.json) return run_json(a, *source);
    std::cerr << a.file << ':' << e.what() << '\n';
    return cli::kExitParse;
  }
  try {
    if (a.at) {
      const cli::EvalSummary r = cli::evaluate_at(p, *a.at, *sem, a.fuel, a.guard_tolerance);
      std::cout << r.line << '\n';
      return r.exit_code;
    }
    const Trace tr = sem_trace(p.root, Env(p.vars.size()), *a.trace, a.samples,
                               DenOptions{a.fuel, a.guard_tolerance, std::nullopt});
    if (a.out.empty() || a.out == "-") {
      cli::write_csv(std::cout, tr, p.vars);
    } else {
      std::ofstream f(a.out);
      if (!f) {
        std::cerr << "cannot write " << a.out << '\n';
        return cli::kExitError;
      }
      cli::write_csv(f, tr, p.vars);
    }
    if (a.json) run_json(a, *source);
    return cli::trace_exit_code(tr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitError;
  }
}

struct CheckArgs {
  std::uint64_t cases = 10'000;
  std::uint64_t seed = 1;
  std::uint64_t fuel = 100'000;
  double rel = 1e-9;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  bool shrink = true;
};

int run_check(const CheckArgs& a) {
  std::vector<std::optional<Discrepancy>> found(a.cases);
  const EquivalenceOptions opts{a.fuel, a.rel, 0.0};
  auto work = [&](unsigned lane) {
    for (std::uint64_t i = lane; i < a.cases; i += a.jobs) {
      std::mt19937_64 rng(a.seed * 0x9E3779B97F4A7C15ULL + i);
      GenConfig cfg;
      cfg.var_count = 1 + rng() % 3;
      const Program p = gen_program(cfg, rng);
      const Env env = gen_env(p.vars, rng);
      const auto times = interesting_times(p, env, rng);
      const double t = times[rng() % times.size()];
      auto d = check_equivalence(p, env, t, opts);
      if (d && a.shrink) {
        const ProgPtr small = shrink(p.root, [&](const ProgPtr& q) {
          return check_equivalence(Program{q, p.vars}, env, t, opts).has_value();
        });
        d = check_equivalence(Program{small, p.vars}, env, t, opts);
      }
      found[i] = std::move(d);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned lane = 0; lane < a.jobs; ++lane) pool.emplace_back(work, lane);
  for (auto& th : pool) th.join();
  std::uint64_t n = 0;
  for (const auto& d : found) {
    if (!d) continue;
    ++n;
    std::cout << d->to_json_line() << '\n';
  }
  std::cerr << a.cases << " cases, " << n << " discrepancies\n";
  return n == 0 ? 0 : 1;
}

Service* running_service = nullptr;

void on_signal(int) {
  if (running_service) running_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyb: evaluator for hybrid while-programs"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "evaluate a program at a time instant or sample its trajectory");
  run->add_option("file", ra.file, "program file (.hyb)")->required();
  auto* at = run->add_option("--at", ra.at, "evaluate at time T");
  auto* tr = run->add_option("--trace", ra.trace, "sample the trajectory on [0, T_MAX]");
  at->excludes(tr);
  run->add_option("--samples", ra.samples, "number of samples for --trace")->capture_default_str();
  run->add_option("--out", ra.out, "CSV output file for --trace (default stdout)");
  run->add_option("--fuel", ra.fuel, "step budget")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--semantics", ra.semantics, "small, big or den")->capture_default_str();
  run->add_option("--guard-tolerance", ra.guard_tolerance, "treat |lhs - rhs| <= D as equal in guards")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--json", ra.json, "print the service response for the same request");

  auto* repl = app.add_subcommand("repl", "interactive session");
  std::string repl_file;
  repl->add_option("file", repl_file, "program to load first");

  ServiceConfig sc;
  auto* serve = app.add_subcommand("serve", "HTTP service");
  serve->add_option("--host", sc.host, "bind address")->capture_default_str();
  serve->add_option("--port", sc.port, "port")->capture_default_str();
  serve->add_option("--cors-origin", sc.cors_origin, "allowed CORS origin");
  serve->add_option("--max-inflight", sc.max_inflight, "concurrent evaluations before 429")->capture_default_str();

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "cross-check the three semantics on generated programs");
  check->add_option("--cases", ca.cases, "generated (program, env, t) cases")->capture_default_str();
  check->add_option("--seed", ca.seed, "generator seed")->capture_default_str();
  check->add_option("--fuel", ca.fuel, "step budget")->capture_default_str();
  check->add_option("--jobs", ca.jobs, "worker threads")->check(CLI::PositiveNumber);
  check->add_flag("!--no-shrink", ca.shrink, "report discrepancies unshrunk");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (!ra.at && !ra.trace) {
      std::ifstream probe(ra.file);
      if (!probe) {
        std::cerr << "cannot open " << ra.file << '\n';
        return cli::kExitParse;
      }
      std::cerr << "one of --at or --trace is required\n";
      return cli::kExitError;
    }
    return run_batch(ra);
  }
  if (repl->parsed()) {
    cli::Session session(std::cout, std::cerr);
    if (!repl_file.empty()) session.execute(":load " + repl_file);
    session.run(std::cin, isatty(STDIN_FILENO));
    return 0;
  }
  if (serve->parsed()) {
    Service svc(sc);
    running_service = &svc;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on " << sc.host << ':' << sc.port << '\n';
    if (!svc.listen()) {
      std::cerr << "cannot bind " << sc.host << ':' << sc.port << '\n';
      return 1;
    }
    return 0;
  }
  return run_check(ca);
}
