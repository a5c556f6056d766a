#include "hyb/ast.hpp"

#include "hyb/overloaded.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace hyb {

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

constexpr std::string_view kKeywords[] = {"if", "then", "else", "while", "for", "until", "wait", "true", "false"};

}  // namespace

bool is_valid_identifier(std::string_view name) {
  if (name.empty() || !is_alpha(name.front())) return false;
  for (char c : name.substr(1)) {
    if (!is_alpha(c) && !is_digit(c) && c != '_') return false;
  }
  for (auto k : kKeywords)
    if (name == k) return false;
  return true;
}

VariableSet::VariableSet(std::vector<std::string> names) {
  for (auto& n : names) intern(n);
}

Var VariableSet::intern(const std::string& name) {
  if (auto it = index_.find(name); it != index_.end()) return Var{name, it->second};
  if (!is_valid_identifier(name)) throw std::invalid_argument("invalid variable name '" + name + "'");
  const std::size_t idx = names_.size();
  names_.push_back(name);
  index_.emplace(name, idx);
  return Var{name, idx};
}

std::optional<Var> VariableSet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return Var{it->first, it->second};
}

bool VariableSet::contains(const Var& v) const {
  return v.index < names_.size() && names_[v.index] == v.name;
}

// ---- constructors -------------------------------------------------------

LTermPtr lconst(double value, SourceSpan span) {
  return std::make_shared<const LTerm>(LTerm{LConst{value}, span});
}
LTermPtr lscaled(double coeff, Var var, SourceSpan span) {
  return std::make_shared<const LTerm>(LTerm{LScaled{coeff, std::move(var)}, span});
}
LTermPtr lsum(LTermPtr lhs, LTermPtr rhs, SourceSpan span) {
  return std::make_shared<const LTerm>(LTerm{LSum{std::move(lhs), std::move(rhs)}, span});
}

BExprPtr btrue(SourceSpan span) { return std::make_shared<const BExpr>(BExpr{BTrue{}, span}); }
BExprPtr bfalse(SourceSpan span) { return std::make_shared<const BExpr>(BExpr{BFalse{}, span}); }
BExprPtr bleq(LTermPtr lhs, LTermPtr rhs, SourceSpan span) {
  return std::make_shared<const BExpr>(BExpr{BCmp{CmpOp::leq, std::move(lhs), std::move(rhs)}, span});
}
BExprPtr bgeq(LTermPtr lhs, LTermPtr rhs, SourceSpan span) {
  return std::make_shared<const BExpr>(BExpr{BCmp{CmpOp::geq, std::move(lhs), std::move(rhs)}, span});
}
BExprPtr band(BExprPtr lhs, BExprPtr rhs, SourceSpan span) {
  return std::make_shared<const BExpr>(BExpr{BAnd{std::move(lhs), std::move(rhs)}, span});
}
BExprPtr bor(BExprPtr lhs, BExprPtr rhs, SourceSpan span) {
  return std::make_shared<const BExpr>(BExpr{BOr{std::move(lhs), std::move(rhs)}, span});
}
BExprPtr bnot(BExprPtr arg, SourceSpan span) {
  return std::make_shared<const BExpr>(BExpr{BNot{std::move(arg)}, span});
}

ProgPtr make_atomic(Atomic a, SourceSpan span) {
  return std::make_shared<const Prog>(Prog{At{std::move(a)}, span});
}
ProgPtr make_seq(ProgPtr first, ProgPtr second, SourceSpan span) {
  return std::make_shared<const Prog>(Prog{Seq{std::move(first), std::move(second)}, span});
}
ProgPtr make_ite(BExprPtr cond, ProgPtr then_branch, ProgPtr else_branch, SourceSpan span) {
  return std::make_shared<const Prog>(
      Prog{Ite{std::move(cond), std::move(then_branch), std::move(else_branch)}, span});
}
ProgPtr make_while(BExprPtr cond, ProgPtr body, SourceSpan span) {
  return std::make_shared<const Prog>(Prog{While{std::move(cond), std::move(body)}, span});
}

ProgPtr make_sequence(const std::vector<ProgPtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("make_sequence: empty statement list");
  ProgPtr acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
    SourceSpan span{(*it)->span.line, (*it)->span.column, acc->span.end_line, acc->span.end_column};
    acc = make_seq(*it, acc, span);
  }
  return acc;
}

// ---- well-formedness ----------------------------------------------------

namespace {

void check_lterm(const LTerm& t, const VariableSet& vars, std::vector<Diagnostic>& out) {
  std::visit(overloaded{
                 [](const LConst&) {},
                 [&](const LScaled& s) {
                   if (!vars.contains(s.var)) out.push_back({"unknown variable " + s.var.name, t.span});
                 },
                 [&](const LSum& s) {
                   check_lterm(*s.lhs, vars, out);
                   check_lterm(*s.rhs, vars, out);
                 },
             },
             t.node);
}

void check_bexpr(const BExpr& b, const VariableSet& vars, std::vector<Diagnostic>& out) {
  std::visit(overloaded{
                 [](const BTrue&) {},
                 [](const BFalse&) {},
                 [&](const BCmp& c) {
                   check_lterm(*c.lhs, vars, out);
                   check_lterm(*c.rhs, vars, out);
                 },
                 [&](const BAnd& c) {
                   check_bexpr(*c.lhs, vars, out);
                   check_bexpr(*c.rhs, vars, out);
                 },
                 [&](const BOr& c) {
                   check_bexpr(*c.lhs, vars, out);
                   check_bexpr(*c.rhs, vars, out);
                 },
                 [&](const BNot& c) { check_bexpr(*c.arg, vars, out); },
             },
             b.node);
}

void check_atomic(const Atomic& a, SourceSpan span, const VariableSet& vars, std::vector<Diagnostic>& out) {
  std::visit(overloaded{
                 [&](const Assign& as) {
                   if (!vars.contains(as.var)) out.push_back({"unknown variable " + as.var.name, span});
                   check_lterm(*as.value, vars, out);
                 },
                 [&](const DiffFor& d) {
                   std::vector<int> seen(vars.size(), 0);
                   for (const auto& [v, rhs] : d.equations) {
                     SourceSpan where = rhs->span.known() ? rhs->span : span;
                     if (!vars.contains(v)) {
                       out.push_back({"unknown variable " + v.name, where});
                     } else if (seen[v.index]++ > 0) {
                       out.push_back({"duplicate equation for " + v.name + "'", where});
                     }
                     check_lterm(*rhs, vars, out);
                   }
                   for (std::size_t i = 0; i < vars.size(); ++i) {
                     if (seen[i] == 0) {
                       out.push_back({"incomplete system: missing equation for " + vars.names()[i] + "'", span});
                     }
                   }
                   check_lterm(*d.duration, vars, out);
                 },
             },
             a);
}

void check_prog(const Prog& p, const VariableSet& vars, std::vector<Diagnostic>& out) {
  std::visit(overloaded{
                 [&](const At& a) { check_atomic(a.atomic, p.span, vars, out); },
                 [&](const Seq& s) {
                   check_prog(*s.first, vars, out);
                   check_prog(*s.second, vars, out);
                 },
                 [&](const Ite& i) {
                   check_bexpr(*i.cond, vars, out);
                   check_prog(*i.then_branch, vars, out);
                   check_prog(*i.else_branch, vars, out);
                 },
                 [&](const While& w) {
                   check_bexpr(*w.cond, vars, out);
                   check_prog(*w.body, vars, out);
                 },
             },
             p.node);
}

}  // namespace

std::vector<Diagnostic> well_formed(const Prog& p, const VariableSet& vars) {
  std::vector<Diagnostic> out;
  check_prog(p, vars, out);
  return out;
}

NonPositiveEpsilon::NonPositiveEpsilon(double eps)
    : std::invalid_argument("until: step size must be positive, got " + format_number(eps)) {}

DiffFor desugar_wait(LTermPtr duration, const VariableSet& vars) {
  DiffFor d;
  d.equations.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) d.equations.emplace_back(vars.at(i), lconst(0.0));
  d.duration = std::move(duration);
  return d;
}

ProgPtr desugar_until(std::vector<Equation> equations, double eps, BExprPtr psi, SourceSpan span) {
  if (!(eps > 0.0)) throw NonPositiveEpsilon(eps);
  auto step = make_atomic(DiffFor{std::move(equations), lconst(eps)}, span);
  const SourceSpan guard_span = psi ? psi->span : SourceSpan{};
  return make_while(bnot(std::move(psi), guard_span), std::move(step), span);
}

// ---- structural equality ------------------------------------------------

namespace {

bool same_number(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || (a == b && std::signbit(a) == std::signbit(b));
}

}  // namespace

bool structurally_equal(const LTerm& a, const LTerm& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(overloaded{
                        [&](const LConst& x) { return same_number(x.value, std::get<LConst>(b.node).value); },
                        [&](const LScaled& x) {
                          const auto& y = std::get<LScaled>(b.node);
                          return same_number(x.coeff, y.coeff) && x.var.name == y.var.name;
                        },
                        [&](const LSum& x) {
                          const auto& y = std::get<LSum>(b.node);
                          return structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
                        },
                    },
                    a.node);
}

bool structurally_equal(const BExpr& a, const BExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(overloaded{
                        [](const BTrue&) { return true; },
                        [](const BFalse&) { return true; },
                        [&](const BCmp& x) {
                          const auto& y = std::get<BCmp>(b.node);
                          return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) &&
                                 structurally_equal(*x.rhs, *y.rhs);
                        },
                        [&](const BAnd& x) {
                          const auto& y = std::get<BAnd>(b.node);
                          return structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
                        },
                        [&](const BOr& x) {
                          const auto& y = std::get<BOr>(b.node);
                          return structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
                        },
                        [&](const BNot& x) { return structurally_equal(*x.arg, *std::get<BNot>(b.node).arg); },
                    },
                    a.node);
}

bool structurally_equal(const Atomic& a, const Atomic& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<Assign>(&a)) {
    const auto& y = std::get<Assign>(b);
    return x->var.name == y.var.name && structurally_equal(*x->value, *y.value);
  }
  const auto& x = std::get<DiffFor>(a);
  const auto& y = std::get<DiffFor>(b);
  if (x.equations.size() != y.equations.size()) return false;
  for (std::size_t i = 0; i < x.equations.size(); ++i) {
    if (x.equations[i].first.name != y.equations[i].first.name) return false;
    if (!structurally_equal(*x.equations[i].second, *y.equations[i].second)) return false;
  }
  return structurally_equal(*x.duration, *y.duration);
}

bool structurally_equal(const Prog& a, const Prog& b) {
  if (&a == &b) return true;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(overloaded{
                        [&](const At& x) { return structurally_equal(x.atomic, std::get<At>(b.node).atomic); },
                        [&](const Seq& x) {
                          const auto& y = std::get<Seq>(b.node);
                          return structurally_equal(*x.first, *y.first) && structurally_equal(*x.second, *y.second);
                        },
                        [&](const Ite& x) {
                          const auto& y = std::get<Ite>(b.node);
                          return structurally_equal(*x.cond, *y.cond) &&
                                 structurally_equal(*x.then_branch, *y.then_branch) &&
                                 structurally_equal(*x.else_branch, *y.else_branch);
                        },
                        [&](const While& x) {
                          const auto& y = std::get<While>(b.node);
                          return structurally_equal(*x.cond, *y.cond) && structurally_equal(*x.body, *y.body);
                        },
                    },
                    a.node);
}

// ---- printing -----------------------------------------------------------

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string pretty_print(const LTerm& t) {
  return std::visit(overloaded{
                        [](const LConst& c) { return format_number(c.value); },
                        [](const LScaled& s) {
                          if (s.coeff == 1.0 && !std::signbit(s.coeff)) return s.var.name;
                          return format_number(s.coeff) + "*" + s.var.name;
                        },
                        [](const LSum& s) { return pretty_print(*s.lhs) + " + " + pretty_print(*s.rhs); },
                    },
                    t.node);
}

namespace {

// precedence: 0 = or, 1 = and, 2 = unary/atom
std::string print_bexpr(const BExpr& b, int context) {
  auto wrap = [&](std::string s, int own) { return own < context ? "(" + s + ")" : s; };
  return std::visit(overloaded{
                        [](const BTrue&) { return std::string("true"); },
                        [](const BFalse&) { return std::string("false"); },
                        [&](const BCmp& c) {
                          return wrap(pretty_print(*c.lhs) + (c.op == CmpOp::leq ? " <= " : " >= ") +
                                          pretty_print(*c.rhs),
                                      2);
                        },
                        [&](const BAnd& c) {
                          return wrap(print_bexpr(*c.lhs, 1) + " && " + print_bexpr(*c.rhs, 2), 1);
                        },
                        [&](const BOr& c) {
                          return wrap(print_bexpr(*c.lhs, 0) + " || " + print_bexpr(*c.rhs, 1), 0);
                        },
                        [&](const BNot& c) {
                          const bool bare = std::holds_alternative<BTrue>(c.arg->node) ||
                                            std::holds_alternative<BFalse>(c.arg->node) ||
                                            std::holds_alternative<BNot>(c.arg->node);
                          return "!" + (bare ? print_bexpr(*c.arg, 2) : "(" + print_bexpr(*c.arg, 0) + ")");
                        },
                    },
                    b.node);
}

void print_prog(const Prog& p, std::ostringstream& out) {
  std::visit(overloaded{
                 [&](const At& a) { out << pretty_print(a.atomic); },
                 [&](const Seq& s) {
                   print_prog(*s.first, out);
                   out << " ; ";
                   print_prog(*s.second, out);
                 },
                 [&](const Ite& i) {
                   out << "if " << pretty_print(*i.cond) << " then { ";
                   print_prog(*i.then_branch, out);
                   out << " } else { ";
                   print_prog(*i.else_branch, out);
                   out << " }";
                 },
                 [&](const While& w) {
                   out << "while " << pretty_print(*w.cond) << " { ";
                   print_prog(*w.body, out);
                   out << " }";
                 },
             },
             p.node);
}

}  // namespace

std::string pretty_print(const BExpr& b) { return print_bexpr(b, 0); }

std::string pretty_print(const Atomic& a) {
  if (const auto* as = std::get_if<Assign>(&a)) return as->var.name + " := " + pretty_print(*as->value);
  const auto& d = std::get<DiffFor>(a);
  std::string out;
  for (std::size_t i = 0; i < d.equations.size(); ++i) {
    if (i) out += ", ";
    out += d.equations[i].first.name + "' = " + pretty_print(*d.equations[i].second);
  }
  if (d.equations.empty()) return "wait " + pretty_print(*d.duration);
  return out + " for " + pretty_print(*d.duration);
}

std::string pretty_print(const Prog& p) {
  std::ostringstream out;
  print_prog(p, out);
  return out.str();
}

std::size_t node_count(const Prog& p) {
  return std::visit(overloaded{
                        [](const At&) -> std::size_t { return 1; },
                        [](const Seq& s) { return 1 + node_count(*s.first) + node_count(*s.second); },
                        [](const Ite& i) { return 1 + node_count(*i.then_branch) + node_count(*i.else_branch); },
                        [](const While& w) { return 1 + node_count(*w.body); },
                    },
                    p.node);
}

}  // namespace hyb
