#include "session.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "hyb/bigstep.hpp"
#include "hyb/overloaded.hpp"
#include "hyb/parser.hpp"
#include "hyb/smallstep.hpp"

namespace hyb::cli {

std::optional<Semantics> semantics_from(const std::string& name) {
  if (name == "small") return Semantics::small;
  if (name == "big") return Semantics::big;
  if (name == "den") return Semantics::den;
  return std::nullopt;
}

const char* semantics_name(Semantics s) {
  switch (s) {
    case Semantics::small: return "small";
    case Semantics::big: return "big";
    default: return "den";
  }
}

EvalSummary evaluate_at(const Program& p, double t, Semantics sem, std::uint64_t fuel, double guard_tolerance) {
  const Env env(p.vars.size());
  auto value = [&](const Env& e) { return EvalSummary{"value " + format_env(e, p.vars), kExitOk}; };
  auto terminated = [&](const Env& e, double d) {
    return EvalSummary{"terminated " + format_env(e, p.vars) + " duration=" + format_number(d), kExitOk};
  };
  auto exhausted = [](bool timeout) { return EvalSummary{timeout ? "fuel (timeout)" : "fuel", kExitFuel}; };
  switch (sem) {
    case Semantics::small: {
      RunOptions o;
      o.fuel = fuel;
      o.guard_tolerance = guard_tolerance;
      o.record_trace = false;
      return std::visit(overloaded{
                            [&](const AtTime& a) { return value(a.env); },
                            [&](const Terminated& r) { return terminated(r.env, r.duration); },
                            [&](const FuelExhausted& f) { return exhausted(f.timeout); },
                        },
                        run(p.root, env, t, o).outcome);
    }
    case Semantics::big:
      return std::visit(overloaded{
                            [&](const StopAt& a) { return value(a.env); },
                            [&](const SkipAt& r) { return terminated(r.env, r.consumed); },
                            [&](const BigFuelExhausted& f) { return exhausted(f.timeout); },
                        },
                        evaluate(p.root, env, t, BigOptions{fuel, guard_tolerance, std::nullopt}));
    default:
      return std::visit(overloaded{
                            [&](const ValueAt& a) { return value(a.env); },
                            [&](const TerminatedAt& r) { return terminated(r.env, r.duration); },
                            [&](const DivergedBefore& d) {
                              return EvalSummary{"diverged duration=" + format_number(d.duration), kExitDiverged};
                            },
                            [&](const DenFuelExhausted& f) { return exhausted(f.timeout); },
                        },
                        sem_at(p.root, env, t, DenOptions{fuel, guard_tolerance, std::nullopt}).result);
  }
}

void write_csv(std::ostream& out, const Trace& trace, const VariableSet& vars) {
  out << "t";
  for (const auto& n : vars.names()) out << ',' << n;
  out << ",marker\n";
  for (const auto& p : trace.points) {
    out << format_number(p.t);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      out << ',';
      if (p.env) out << format_number((*p.env)[i]);
    }
    out << ',';
    if (p.marker != Marker::none) out << marker_name(p.marker);
    out << '\n';
  }
}

int trace_exit_code(const Trace& trace) {
  int code = kExitOk;
  for (const auto& m : trace.markers) {
    if (m.kind == Marker::fuel) return kExitFuel;
    if (m.kind == Marker::diverged) code = kExitDiverged;
  }
  return code;
}

namespace {

std::string code_text(const Config& c) {
  if (std::holds_alternative<Stop>(c.code)) return "stop";
  if (std::holds_alternative<Skip>(c.code)) return "skip";
  return pretty_print(*std::get<ProgPtr>(c.code));
}

template <class T>
bool read_arg(std::istringstream& in, T& v) {
  return static_cast<bool>(in >> v);
}

}  // namespace

void Session::load(const std::string& file) {
  try {
    program_ = parse_file(file);
    file_ = file;
    out_ << "loaded " << file << " (";
    for (std::size_t i = 0; i < program_->vars.size(); ++i) out_ << (i ? " " : "") << program_->vars.names()[i];
    out_ << ")\n";
  } catch (const ParseError& e) {
    err_ << file << ':' << e.what() << '\n';
  } catch (const std::exception& e) {
    err_ << e.what() << '\n';
  }
}

void Session::eval(double t) {
  if (t < 0) {
    err_ << "time must be non-negative\n";
    return;
  }
  out_ << evaluate_at(*program_, t, semantics_, fuel_, guard_tolerance_).line << '\n';
}

void Session::trace(double t_max, std::size_t samples, const std::string& file) {
  if (!(t_max > 0) || samples < 2) {
    err_ << "need T_MAX > 0 and N >= 2\n";
    return;
  }
  std::ofstream f(file);
  if (!f) {
    err_ << "cannot write " << file << '\n';
    return;
  }
  const Trace tr = sem_trace(program_->root, Env(program_->vars.size()), t_max, samples,
                             DenOptions{fuel_, guard_tolerance_, std::nullopt});
  write_csv(f, tr, program_->vars);
  out_ << "wrote " << tr.points.size() << " rows to " << file << '\n';
}

void Session::steps(double t, std::size_t max_steps) {
  if (t < 0) {
    err_ << "time must be non-negative\n";
    return;
  }
  Config c{program_->root, Env(program_->vars.size()), t};
  const EvalOptions opts{guard_tolerance_};
  std::size_t n = 0;
  for (; n < max_steps && !c.terminal(); ++n) {
    out_ << code_text(c) << "  " << format_env(c.env, program_->vars) << " t=" << format_number(c.t) << '\n';
    const Step s = step(c, opts);
    out_ << "  -> [";
    for (std::size_t i = 0; i < s.rules.size(); ++i) out_ << (i ? ", " : "") << rule_name(s.rules[i]);
    out_ << "]\n";
    c = s.next;
  }
  out_ << code_text(c) << ' ' << format_env(c.env, program_->vars) << " t=" << format_number(c.t) << '\n';
  if (!c.terminal()) out_ << "(stopped after " << n << " steps)\n";
}

void Session::help() {
  out_ << ":load FILE                 load a program\n"
          ":eval T                    evaluate at time T\n"
          ":trace T_MAX N FILE.csv    sample N points on [0, T_MAX] into a CSV file\n"
          ":steps T [N]               small-step derivation at T, at most N steps (default 100)\n"
          ":fuel N                    step budget (default 1000000)\n"
          ":set guard-tolerance D     treat |lhs - rhs| <= D as equal in guards (default 0)\n"
          ":semantics small|big|den   semantics used by :eval (default small)\n"
          ":quit\n";
}

bool Session::execute(const std::string& line) {
  std::istringstream in(line);
  std::string cmd;
  if (!(in >> cmd)) return true;
  if (cmd == ":quit" || cmd == ":q") return false;
  if (cmd == ":help" || cmd == ":h") {
    help();
    return true;
  }
  if (cmd == ":load") {
    std::string file;
    if (!read_arg(in, file)) {
      err_ << "usage: :load FILE\n";
      return true;
    }
    load(file);
    return true;
  }
  if (cmd == ":fuel") {
    std::uint64_t n = 0;
    if (!read_arg(in, n) || n == 0) {
      err_ << "usage: :fuel N (N >= 1)\n";
      return true;
    }
    fuel_ = n;
    return true;
  }
  if (cmd == ":set") {
    std::string key;
    double d = 0;
    if (!read_arg(in, key) || key != "guard-tolerance" || !read_arg(in, d) || d < 0) {
      err_ << "usage: :set guard-tolerance D (D >= 0)\n";
      return true;
    }
    guard_tolerance_ = d;
    return true;
  }
  if (cmd == ":semantics") {
    std::string name;
    std::optional<Semantics> s;
    if (!read_arg(in, name) || !(s = semantics_from(name))) {
      err_ << "usage: :semantics small|big|den\n";
      return true;
    }
    semantics_ = *s;
    return true;
  }
  if (cmd != ":eval" && cmd != ":trace" && cmd != ":steps") {
    err_ << "unknown command " << cmd << " (try :help)\n";
    return true;
  }
  if (!program_) {
    err_ << "no program loaded\n";
    return true;
  }
  try {
    if (cmd == ":eval") {
      double t = 0;
      if (!read_arg(in, t)) {
        err_ << "usage: :eval T\n";
        return true;
      }
      eval(t);
    } else if (cmd == ":trace") {
      double t_max = 0;
      std::size_t n = 0;
      std::string file;
      if (!read_arg(in, t_max) || !read_arg(in, n) || !read_arg(in, file)) {
        err_ << "usage: :trace T_MAX N FILE.csv\n";
        return true;
      }
      trace(t_max, n, file);
    } else {
      double t = 0;
      if (!read_arg(in, t)) {
        err_ << "usage: :steps T [N]\n";
        return true;
      }
      std::size_t n = 100;
      if (!(in >> std::ws).eof() && !read_arg(in, n)) {
        err_ << "usage: :steps T [N]\n";
        return true;
      }
      steps(t, n);
    }
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
  }
  return true;
}

void Session::run(std::istream& in, bool prompt) {
  std::string line;
  for (;;) {
    if (prompt) out_ << "hyb> " << std::flush;
    if (!std::getline(in, line)) break;
    if (!execute(line)) break;
  }
}

}  // namespace hyb::cli
