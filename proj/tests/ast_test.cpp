#include <gtest/gtest.h>

#include "hyb/ast.hpp"
#include "hyb/parser.hpp"

using namespace hyb;

TEST(VariableSet, InternKeepsFirstAppearanceOrder) {
  VariableSet vs;
  EXPECT_EQ(vs.intern("y").index, 0u);
  EXPECT_EQ(vs.intern("x").index, 1u);
  EXPECT_EQ(vs.intern("y").index, 0u);
  EXPECT_EQ(vs.names(), (std::vector<std::string>{"y", "x"}));
  EXPECT_FALSE(vs.find("z").has_value());
  EXPECT_TRUE(vs.contains(Var{"x", 1}));
  EXPECT_FALSE(vs.contains(Var{"x", 0}));
}

TEST(Identifiers, KeywordsAreNotIdentifiers) {
  EXPECT_TRUE(is_valid_identifier("v_2"));
  EXPECT_FALSE(is_valid_identifier("2v"));
  EXPECT_FALSE(is_valid_identifier("while"));
  EXPECT_FALSE(is_valid_identifier(""));
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(5.0), "5");
  EXPECT_EQ(format_number(-0.5), "-0.5");
  EXPECT_EQ(format_number(1e-5), "1e-05");
  EXPECT_EQ(std::stod(format_number(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(MakeSequence, IsRightNested) {
  VariableSet vs;
  const Var x = vs.intern("x");
  auto a = [&](double c) { return make_atomic(Assign{x, lconst(c)}); };
  const ProgPtr p = make_sequence({a(1), a(2), a(3)});
  const auto& s = std::get<Seq>(p->node);
  EXPECT_TRUE(std::holds_alternative<At>(s.first->node));
  EXPECT_TRUE(std::holds_alternative<Seq>(s.second->node));
  EXPECT_EQ(node_count(*p), 5u);
}

TEST(WellFormed, RejectsDuplicateEquationsAndUnknownVariables) {
  VariableSet vs;
  const Var x = vs.intern("x");
  std::vector<Equation> eqs;
  eqs.emplace_back(x, lconst(1));
  eqs.emplace_back(x, lconst(2));
  const ProgPtr dup = make_atomic(DiffFor{std::move(eqs), lconst(1)});
  EXPECT_FALSE(well_formed(*dup, vs).empty());

  const ProgPtr stray = make_atomic(Assign{x, lscaled(1, Var{"y", 1})});
  EXPECT_FALSE(well_formed(*stray, vs).empty());

  const ProgPtr ok = make_atomic(Assign{x, lsum(lconst(1), lscaled(2, x))});
  EXPECT_TRUE(well_formed(*ok, vs).empty());
}

TEST(Desugar, WaitFreezesEveryVariable) {
  VariableSet vs;
  vs.intern("a");
  vs.intern("b");
  const DiffFor d = desugar_wait(lconst(2), vs);
  ASSERT_EQ(d.equations.size(), 2u);
  for (const auto& [v, rhs] : d.equations) EXPECT_EQ(pretty_print(*rhs), "0");
}

TEST(Desugar, UntilBecomesGuardedLoop) {
  VariableSet vs;
  const Var x = vs.intern("x");
  std::vector<Equation> eqs;
  eqs.emplace_back(x, lconst(1));
  const ProgPtr p = desugar_until(std::move(eqs), 0.25, bgeq(lscaled(1, x), lconst(1)));
  EXPECT_EQ(pretty_print(*p), "while !(x >= 1) { x' = 1 for 0.25 }");
  EXPECT_THROW(desugar_until({}, 0.0, btrue()), NonPositiveEpsilon);
  EXPECT_THROW(desugar_until({}, -1.0, btrue()), NonPositiveEpsilon);
}

TEST(StructuralEquality, IgnoresSpans) {
  const Program a = parse("x := 1 ; y := x");
  const Program b = parse("x:=1;\n\n   y:=x");
  EXPECT_TRUE(structurally_equal(*a.root, *b.root));
  const Program c = parse("x := 1 ; y := 2*x");
  EXPECT_FALSE(structurally_equal(*a.root, *c.root));
}
