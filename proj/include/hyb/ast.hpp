#pragma once

// Abstract syntax of the hybrid while-language.
//
// Nodes are immutable and shared through std::shared_ptr<const T>, so the
// small-step reducer can build residual programs (p';q) without copying the
// untouched parts of the tree.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace hyb {

struct SourceSpan {
  std::uint32_t line = 0;  // 1-based; 0 means "synthesized, no location"
  std::uint32_t column = 0;
  std::uint32_t end_line = 0;
  std::uint32_t end_column = 0;

  bool known() const { return line != 0; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// A program variable. `index` is its slot in the owning VariableSet.
struct Var {
  std::string name;
  std::size_t index = 0;

  friend bool operator==(const Var&, const Var&) = default;
};

bool is_valid_identifier(std::string_view name);

/// The variable set X, in declaration (first-appearance) order.
class VariableSet {
 public:
  VariableSet() = default;
  explicit VariableSet(std::vector<std::string> names);

  /// Returns the existing variable or appends a new one.
  Var intern(const std::string& name);
  std::optional<Var> find(std::string_view name) const;
  Var at(std::size_t index) const { return Var{names_.at(index), index}; }

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::vector<std::string>& names() const { return names_; }
  bool contains(const Var& v) const;

  friend bool operator==(const VariableSet& a, const VariableSet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---- linear terms -------------------------------------------------------

struct LTerm;
using LTermPtr = std::shared_ptr<const LTerm>;

struct LConst {
  double value = 0.0;
};
struct LScaled {
  double coeff = 1.0;
  Var var;
};
struct LSum {
  LTermPtr lhs;
  LTermPtr rhs;
};

struct LTerm {
  std::variant<LConst, LScaled, LSum> node;
  SourceSpan span;
};

LTermPtr lconst(double value, SourceSpan span = {});
LTermPtr lscaled(double coeff, Var var, SourceSpan span = {});
LTermPtr lsum(LTermPtr lhs, LTermPtr rhs, SourceSpan span = {});

// ---- Boolean expressions ------------------------------------------------

struct BExpr;
using BExprPtr = std::shared_ptr<const BExpr>;

enum class CmpOp { leq, geq };

struct BTrue {};
struct BFalse {};
struct BCmp {
  CmpOp op = CmpOp::leq;
  LTermPtr lhs;
  LTermPtr rhs;
};
struct BAnd {
  BExprPtr lhs;
  BExprPtr rhs;
};
struct BOr {
  BExprPtr lhs;
  BExprPtr rhs;
};
struct BNot {
  BExprPtr arg;
};

struct BExpr {
  std::variant<BTrue, BFalse, BCmp, BAnd, BOr, BNot> node;
  SourceSpan span;
};

BExprPtr btrue(SourceSpan span = {});
BExprPtr bfalse(SourceSpan span = {});
BExprPtr bleq(LTermPtr lhs, LTermPtr rhs, SourceSpan span = {});
BExprPtr bgeq(LTermPtr lhs, LTermPtr rhs, SourceSpan span = {});
BExprPtr band(BExprPtr lhs, BExprPtr rhs, SourceSpan span = {});
BExprPtr bor(BExprPtr lhs, BExprPtr rhs, SourceSpan span = {});
BExprPtr bnot(BExprPtr arg, SourceSpan span = {});

// ---- atomic statements and programs ------------------------------------

struct Assign {
  Var var;
  LTermPtr value;
};

using Equation = std::pair<Var, LTermPtr>;

/// x1' = t1, ..., xn' = tn for duration
struct DiffFor {
  std::vector<Equation> equations;
  LTermPtr duration;
};

using Atomic = std::variant<Assign, DiffFor>;

struct Prog;
using ProgPtr = std::shared_ptr<const Prog>;

struct At {
  Atomic atomic;
};
struct Seq {
  ProgPtr first;
  ProgPtr second;
};
struct Ite {
  BExprPtr cond;
  ProgPtr then_branch;
  ProgPtr else_branch;
};
struct While {
  BExprPtr cond;
  ProgPtr body;
};

struct Prog {
  std::variant<At, Seq, Ite, While> node;
  SourceSpan span;
};

ProgPtr make_atomic(Atomic a, SourceSpan span = {});
ProgPtr make_seq(ProgPtr first, ProgPtr second, SourceSpan span = {});
ProgPtr make_ite(BExprPtr cond, ProgPtr then_branch, ProgPtr else_branch, SourceSpan span = {});
ProgPtr make_while(BExprPtr cond, ProgPtr body, SourceSpan span = {});

/// Builds a right-nested sequence p1 ; (p2 ; (... ; pn)). Requires a nonempty list.
ProgPtr make_sequence(const std::vector<ProgPtr>& parts);

/// A parsed or generated program together with its variable set.
struct Program {
  ProgPtr root;
  VariableSet vars;
};

// ---- well-formedness and sugar -----------------------------------------

struct Diagnostic {
  std::string message;
  SourceSpan span;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::vector<Diagnostic> well_formed(const Prog& p, const VariableSet& vars);

class NonPositiveEpsilon : public std::invalid_argument {
 public:
  explicit NonPositiveEpsilon(double eps);
};

/// wait d  ==  x1' = 0, ..., xn' = 0 for d
DiffFor desugar_wait(LTermPtr duration, const VariableSet& vars);

/// eqs until_eps psi  ==  while !psi { eqs for eps }
ProgPtr desugar_until(std::vector<Equation> equations, double eps, BExprPtr psi, SourceSpan span = {});

// ---- structural equality (source spans ignored) ------------------------

bool structurally_equal(const LTerm& a, const LTerm& b);
bool structurally_equal(const BExpr& a, const BExpr& b);
bool structurally_equal(const Atomic& a, const Atomic& b);
bool structurally_equal(const Prog& a, const Prog& b);

// ---- printing -----------------------------------------------------------

/// Shortest decimal string that parses back to exactly `value`.
std::string format_number(double value);

std::string pretty_print(const LTerm& t);
std::string pretty_print(const BExpr& b);
std::string pretty_print(const Atomic& a);
std::string pretty_print(const Prog& p);

std::size_t node_count(const Prog& p);

}  // namespace hyb
