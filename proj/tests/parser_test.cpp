#include <gtest/gtest.h>

#include <random>

#include "hyb/harness.hpp"
#include "hyb/parser.hpp"

using namespace hyb;

TEST(Parser, CruiseController) {
  const Program p = parse("v := 5 ; while true { if v <= 10 then { v' = 1 for 1 } else { v' = -1 for 1 } }");
  EXPECT_EQ(p.vars.names(), std::vector<std::string>{"v"});
  EXPECT_EQ(pretty_print(*p.root), "v := 5 ; while true { if v <= 10 then { v' = 1 for 1 } else { v' = -1 for 1 } }");
}

TEST(Parser, VariablesInFirstAppearanceOrder) {
  const Program p = parse("p := 5 ; v := 0 ; p' = v, v' = -9.8 for 1");
  EXPECT_EQ(p.vars.names(), (std::vector<std::string>{"p", "v"}));
}

TEST(Parser, WaitDesugarsOverAllVariables) {
  const Program p = parse("x := 1 ; wait 0.5 ; y := x");
  EXPECT_EQ(pretty_print(*p.root), "x := 1 ; x' = 0, y' = 0 for 0.5 ; y := x");
}

TEST(Parser, UntilDesugars) {
  const Program p = parse("x' = 1 until [0.5] x >= 2");
  EXPECT_EQ(pretty_print(*p.root), "while !(x >= 2) { x' = 1 for 0.5 }");
}

TEST(Parser, GuardPrecedence) {
  const Program p = parse("if x <= 1 || x >= 2 && !true then { x := 0 } else { x := 1 }");
  EXPECT_EQ(pretty_print(*p.root), "if x <= 1 || x >= 2 && !true then { x := 0 } else { x := 1 }");
  const auto& ite = std::get<Ite>(p.root->node);
  ASSERT_TRUE(std::holds_alternative<BOr>(ite.cond->node));
  EXPECT_TRUE(std::holds_alternative<BAnd>(std::get<BOr>(ite.cond->node).rhs->node));
  const Program q = parse("if (x <= 1 || x >= 2) && !true then { x := 0 } else { x := 1 }");
  EXPECT_EQ(pretty_print(*q.root), "if (x <= 1 || x >= 2) && !true then { x := 0 } else { x := 1 }");
}

TEST(Parser, LinearTermsAreLeftNested) {
  const Program p = parse("x := 1 + 2*y + -3");
  const auto& asg = std::get<Assign>(std::get<At>(p.root->node).atomic);
  const auto& sum = std::get<LSum>(asg.value->node);
  EXPECT_TRUE(std::holds_alternative<LSum>(sum.lhs->node));
  EXPECT_TRUE(std::holds_alternative<LConst>(sum.rhs->node));
}

TEST(Parser, CommentsAndTrailingSemicolon) {
  const Program p = parse("# counter\nx := 0 ; # reset\nwhile true { x := x + 1 ; wait 1 ; } ;\n");
  EXPECT_EQ(p.vars.size(), 1u);
}

TEST(Parser, ExponentLiterals) {
  const Program p = parse("x := 1.5e-3 ; x' = 2E2 for 1e0");
  EXPECT_EQ(pretty_print(*p.root), "x := 0.0015 ; x' = 200 for 1");
}

namespace {

ParseError error_of(const std::string& src) {
  try {
    parse(src);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for: " << src;
  return ParseError("", 0, 0);
}

}  // namespace

TEST(ParserErrors, IncompleteAssignmentHasLocation) {
  const ParseError e = error_of("x :=");
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(e.column(), 5u);
  EXPECT_EQ(e.expected(), (std::vector<std::string>{"number", "identifier"}));
  EXPECT_EQ(std::string(e.what()), "1:5: expected number or identifier but found end of input");
}

TEST(ParserErrors, Targeted) {
  EXPECT_NE(error_of("if x < 1 then { x := 0 } else { x := 1 }").message().find("strict"), std::string::npos);
  EXPECT_NE(error_of("x := y - 1").message().find("subtraction"), std::string::npos);
  EXPECT_EQ(error_of("").message(), "empty program");
  EXPECT_EQ(error_of("   # nothing\n").message(), "empty program");
  EXPECT_NE(error_of("x' = 1, x' = 2 for 1").message().find("duplicate"), std::string::npos);
  EXPECT_NE(error_of("x' = 1 until [0] x >= 1").message().find("step size must be positive"), std::string::npos);
}

TEST(ParserErrors, LineAndColumnAcrossLines) {
  const ParseError e = error_of("x := 1 ;\nwhile true {\n  x := x +\n}");
  EXPECT_EQ(e.line(), 4u);
  EXPECT_EQ(e.column(), 1u);
}

TEST(ParserErrors, ReservedWordsAndStrayTokens) {
  EXPECT_THROW(parse("while := 1"), ParseError);
  EXPECT_THROW(parse("x := 1 }"), ParseError);
  EXPECT_THROW(parse("x := 1 $"), ParseError);
  EXPECT_THROW(parse("x' = 1 for"), ParseError);
}

TEST(ParseFile, MissingFile) { EXPECT_THROW(parse_file("/nonexistent/prog.hyb"), std::runtime_error); }

TEST(RoundTrip, GeneratedPrograms) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    GenConfig cfg;
    cfg.var_count = 1 + i % 3;
    const Program p = gen_program(cfg, rng);
    const std::string text = pretty_print(*p.root);
    const Program q = parse(text);
    ASSERT_TRUE(structurally_equal(*p.root, *q.root)) << text;
    ASSERT_EQ(pretty_print(*q.root), text);
  }
}
