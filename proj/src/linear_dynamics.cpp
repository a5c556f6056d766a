#include "hyb/linear_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "hyb/kernels.hpp"
#include "hyb/overloaded.hpp"

namespace hyb {

Env Env::updated(const Var& x, double value) const {
  Env out = *this;
  out.values_.at(x.index) = value;
  return out;
}

std::string format_env(const Env& env, const VariableSet& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ' ';
    out += vars.names()[i] + "=" + format_number(env[i]);
  }
  return out;
}

double eval_lterm(const LTerm& t, const Env& env) {
  return std::visit(overloaded{
                        [](const LConst& c) { return c.value; },
                        [&](const LScaled& s) { return s.coeff * env[s.var.index]; },
                        [&](const LSum& s) { return eval_lterm(*s.lhs, env) + eval_lterm(*s.rhs, env); },
                    },
                    t.node);
}

bool eval_bexpr(const BExpr& b, const Env& env, double tol) {
  return std::visit(overloaded{
                        [](const BTrue&) { return true; },
                        [](const BFalse&) { return false; },
                        [&](const BCmp& c) {
                          const double l = eval_lterm(*c.lhs, env);
                          const double r = eval_lterm(*c.rhs, env);
                          if (tol > 0.0 && std::abs(l - r) <= tol) return true;
                          return c.op == CmpOp::leq ? l <= r : l >= r;
                        },
                        [&](const BAnd& c) { return eval_bexpr(*c.lhs, env, tol) && eval_bexpr(*c.rhs, env, tol); },
                        [&](const BOr& c) { return eval_bexpr(*c.lhs, env, tol) || eval_bexpr(*c.rhs, env, tol); },
                        [&](const BNot& c) { return !eval_bexpr(*c.arg, env, tol); },
                    },
                    b.node);
}

namespace {

void collect(const LTerm& t, double scale, std::vector<double>& row, double& constant) {
  std::visit(overloaded{
                 [&](const LConst& c) { constant += scale * c.value; },
                 [&](const LScaled& s) { row[s.var.index] += scale * s.coeff; },
                 [&](const LSum& s) {
                   collect(*s.lhs, scale, row, constant);
                   collect(*s.rhs, scale, row, constant);
                 },
             },
             t.node);
}

bool acyclic(const std::vector<double>& a, std::size_t n) {
  // Kahn's algorithm on the edge set j -> i for every a[i][j] != 0.
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a[i * n + j] != 0.0) ++indegree[i];
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::size_t done = 0;
  while (!ready.empty()) {
    const std::size_t j = ready.back();
    ready.pop_back();
    ++done;
    for (std::size_t i = 0; i < n; ++i)
      if (a[i * n + j] != 0.0 && --indegree[i] == 0) ready.push_back(i);
  }
  return done == n;
}

// Solves q x = p for n x n matrices with partial pivoting; p is overwritten with x.
void lu_solve(std::vector<double> q, std::vector<double>& p, std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(q[r * n + col]) > std::abs(q[piv * n + col])) piv = r;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(q[piv * n + c], q[col * n + c]);
        std::swap(p[piv * n + c], p[col * n + c]);
      }
    }
    const double d = q[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = q[r * n + col] / d;
      if (f == 0.0) continue;
      kernels::axpy(-f, &q[col * n], &q[r * n], n);
      kernels::axpy(-f, &p[col * n], &p[r * n], n);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    const double d = q[col * n + col];
    for (std::size_t c = 0; c < n; ++c) p[col * n + c] /= d;
    for (std::size_t r = 0; r < col; ++r) {
      const double f = q[r * n + col];
      if (f != 0.0) kernels::axpy(-f, &p[col * n], &p[r * n], n);
    }
  }
}

}  // namespace

LinSys compile_system(const std::vector<Equation>& equations, std::size_t n) {
  LinSys sys;
  sys.n = n;
  sys.a.assign(sys.n * sys.n, 0.0);
  sys.b.assign(sys.n, 0.0);
  for (const auto& [x, rhs] : equations) {
    std::vector<double> row(sys.n, 0.0);
    double constant = 0.0;
    collect(*rhs, 1.0, row, constant);
    std::copy(row.begin(), row.end(), sys.a.begin() + static_cast<std::ptrdiff_t>(x.index * sys.n));
    sys.b[x.index] = constant;
  }
  sys.nilpotent = acyclic(sys.a, sys.n);
  sys.zero = std::all_of(sys.a.begin(), sys.a.end(), [](double v) { return v == 0.0; }) &&
             std::all_of(sys.b.begin(), sys.b.end(), [](double v) { return v == 0.0; });
  return sys;
}

NegativeTime::NegativeTime(double t) : std::domain_error("flow evaluated at negative time " + format_number(t)) {}

std::vector<double> expm(const std::vector<double>& m, std::size_t n) {
  static constexpr double c[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;

  double norm1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(m[i * n + j]);
    norm1 = std::max(norm1, col);
  }
  int s = 0;
  if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const double scale = std::ldexp(1.0, -s);

  const std::size_t nn = n * n;
  std::vector<double> a(nn), a2(nn), a4(nn), a6(nn), tmp(nn), u(nn), v(nn);
  for (std::size_t k = 0; k < nn; ++k) a[k] = m[k] * scale;
  kernels::matmul(a.data(), a.data(), a2.data(), n);
  kernels::matmul(a2.data(), a2.data(), a4.data(), n);
  kernels::matmul(a2.data(), a4.data(), a6.data(), n);

  // U = A [A6 (c13 A6 + c11 A4 + c9 A2) + c7 A6 + c5 A4 + c3 A2 + c1 I]
  std::fill(tmp.begin(), tmp.end(), 0.0);
  kernels::axpy(c[13], a6.data(), tmp.data(), nn);
  kernels::axpy(c[11], a4.data(), tmp.data(), nn);
  kernels::axpy(c[9], a2.data(), tmp.data(), nn);
  std::vector<double> inner(nn);
  kernels::matmul(a6.data(), tmp.data(), inner.data(), n);
  kernels::axpy(c[7], a6.data(), inner.data(), nn);
  kernels::axpy(c[5], a4.data(), inner.data(), nn);
  kernels::axpy(c[3], a2.data(), inner.data(), nn);
  for (std::size_t i = 0; i < n; ++i) inner[i * n + i] += c[1];
  kernels::matmul(a.data(), inner.data(), u.data(), n);

  // V = A6 (c12 A6 + c10 A4 + c8 A2) + c6 A6 + c4 A4 + c2 A2 + c0 I
  std::fill(tmp.begin(), tmp.end(), 0.0);
  kernels::axpy(c[12], a6.data(), tmp.data(), nn);
  kernels::axpy(c[10], a4.data(), tmp.data(), nn);
  kernels::axpy(c[8], a2.data(), tmp.data(), nn);
  kernels::matmul(a6.data(), tmp.data(), v.data(), n);
  kernels::axpy(c[6], a6.data(), v.data(), nn);
  kernels::axpy(c[4], a4.data(), v.data(), nn);
  kernels::axpy(c[2], a2.data(), v.data(), nn);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] += c[0];

  std::vector<double> p(nn), q(nn);
  for (std::size_t k = 0; k < nn; ++k) {
    p[k] = v[k] + u[k];
    q[k] = v[k] - u[k];
  }
  lu_solve(std::move(q), p, n);
  for (int k = 0; k < s; ++k) {
    kernels::matmul(p.data(), p.data(), tmp.data(), n);
    p.swap(tmp);
  }
  return p;
}

FlowFn::FlowFn(LinSys sys, Env initial) : sys_(std::move(sys)), x0_(std::move(initial)) {
  if (x0_.size() != sys_.n) throw std::invalid_argument("flow: environment size does not match the system");
}

Env FlowFn::at(double t) const {
  if (t < 0.0 || std::isnan(t)) throw NegativeTime(t);
  if (t == 0.0 || sys_.zero) return x0_;
  const std::size_t n = sys_.n;
  const std::size_t m = n + 1;
  std::vector<double> aug(m * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i * m + j] = sys_.a[i * n + j];
    aug[i * m + n] = sys_.b[i];
  }
  std::vector<double> state(m);
  for (std::size_t i = 0; i < n; ++i) state[i] = x0_[i];
  state[n] = 1.0;

  std::vector<double> out(m);
  if (sys_.nilpotent) {
    // Finite Taylor series: sum_k (tM)^k / k! applied to [x0; 1], exact up to rounding.
    std::vector<double> term = state, next(m);
    out = state;
    for (std::size_t k = 1; k <= m; ++k) {
      kernels::matvec(aug.data(), term.data(), next.data(), m);
      const double f = t / static_cast<double>(k);
      bool zero = true;
      for (std::size_t i = 0; i < m; ++i) {
        term[i] = next[i] * f;
        zero = zero && term[i] == 0.0;
      }
      if (zero) break;
      for (std::size_t i = 0; i < m; ++i) out[i] += term[i];
    }
  } else {
    for (auto& x : aug) x *= t;
    const auto e = expm(aug, m);
    kernels::matvec(e.data(), state.data(), out.data(), m);
  }
  Env result(n);
  for (std::size_t i = 0; i < n; ++i) result[i] = out[i];
  return result;
}

}  // namespace hyb
