#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyb/ast.hpp"

namespace hyb {

/// sigma : X -> R, stored in the variable order of the owning VariableSet.
class Env {
 public:
  Env() = default;
  explicit Env(std::size_t n) : values_(n, 0.0) {}
  explicit Env(std::vector<double> values) : values_(std::move(values)) {}

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](const Var& v) const { return values_.at(v.index); }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  /// sigma with x mapped to value; other variables untouched.
  Env updated(const Var& x, double value) const;

  friend bool operator==(const Env&, const Env&) = default;

 private:
  std::vector<double> values_;
};

/// "x=1 y=2.5"
std::string format_env(const Env& env, const VariableSet& vars);

double eval_lterm(const LTerm& t, const Env& env);

/// Comparisons use exact double arithmetic; with guard_tolerance > 0, |lhs - rhs| <= tol counts as equality.
bool eval_bexpr(const BExpr& b, const Env& env, double guard_tolerance = 0.0);

/// x' = A x + b over the variable order of X.
struct LinSys {
  std::size_t n = 0;
  std::vector<double> a;  // n x n, row-major
  std::vector<double> b;
  /// A has an acyclic dependency graph, so the augmented matrix is nilpotent.
  bool nilpotent = true;
  /// A = 0 and b = 0: every state is an equilibrium.
  bool zero = true;
};

LinSys compile_system(const std::vector<Equation>& equations, std::size_t n);
inline LinSys compile_system(const std::vector<Equation>& equations, const VariableSet& vars) {
  return compile_system(equations, vars.size());
}

class NegativeTime : public std::domain_error {
 public:
  explicit NegativeTime(double t);
};

/// exp(m) for an n x n row-major matrix, scaling and squaring with a Pade(13) core.
std::vector<double> expm(const std::vector<double>& m, std::size_t n);

/// phi_sigma : [0, inf) -> R^n
class FlowFn {
 public:
  FlowFn(LinSys sys, Env initial);

  Env at(double t) const;
  const LinSys& system() const { return sys_; }
  const Env& initial() const { return x0_; }

 private:
  LinSys sys_;
  Env x0_;
};

inline Env flow_at(const FlowFn& f, double t) { return f.at(t); }

}  // namespace hyb
