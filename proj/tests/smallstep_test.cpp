#include <gtest/gtest.h>

#include "hyb/parser.hpp"
#include "hyb/smallstep.hpp"

using namespace hyb;

namespace {

std::vector<std::string> names(const std::vector<Rule>& rules) {
  std::vector<std::string> out;
  for (Rule r : rules) out.emplace_back(rule_name(r));
  return out;
}

Config start(const Program& p, double t) { return Config{p.root, Env(p.vars.size()), t}; }

}  // namespace

TEST(Step, Assignment) {
  const Program p = parse("x := 1");
  const Step s = step(start(p, 0));
  EXPECT_EQ(names(s.rules), std::vector<std::string>{"asg"});
  EXPECT_TRUE(std::holds_alternative<Skip>(s.next.code));
  EXPECT_EQ(s.next.env[0], 1.0);
}

TEST(Step, DiffStopAndSkip) {
  const Program p = parse("x' = 2 for 1");
  const Step stop = step(start(p, 0.25));
  EXPECT_EQ(names(stop.rules), std::vector<std::string>{"diff-stop"});
  EXPECT_TRUE(std::holds_alternative<Stop>(stop.next.code));
  EXPECT_EQ(stop.next.env[0], 0.5);
  EXPECT_EQ(stop.next.t, 0.0);

  const Step skip = step(start(p, 1.5));
  EXPECT_EQ(names(skip.rules), std::vector<std::string>{"diff-skip"});
  EXPECT_TRUE(std::holds_alternative<Skip>(skip.next.code));
  EXPECT_EQ(skip.next.env[0], 2.0);
  EXPECT_EQ(skip.next.t, 0.5);

  // boundary: t = duration consumes the statement
  const Step edge = step(start(p, 1.0));
  EXPECT_EQ(names(edge.rules), std::vector<std::string>{"diff-skip"});
  EXPECT_EQ(edge.next.t, 0.0);
}

TEST(Step, ZeroDurationIsSkip) {
  const Program p = parse("x' = 1 for 0");
  const Step s = step(start(p, 0));
  EXPECT_EQ(names(s.rules), std::vector<std::string>{"diff-skip"});
}

TEST(Step, NegativeDurationIsAnError) {
  const Program p = parse("x := -1 ; x' = 1 for x");
  const Step s = step(start(p, 0));
  EXPECT_THROW(step(s.next), NegativeDuration);
}

TEST(Step, ConditionalsAndLoops) {
  const Program ite = parse("if x >= 0 then { x := 1 } else { x := 2 }");
  EXPECT_EQ(names(step(start(ite, 0)).rules), std::vector<std::string>{"if-true"});
  const Program wh = parse("while x >= 1 { x := 0 }");
  EXPECT_EQ(names(step(start(wh, 0)).rules), std::vector<std::string>{"wh-false"});
  EXPECT_TRUE(std::holds_alternative<Skip>(step(start(wh, 0)).next.code));
}

TEST(Step, SequenceRules) {
  const Program p = parse("x := 1 ; x := 2");
  const Step s = step(start(p, 0));
  EXPECT_EQ(names(s.rules), (std::vector<std::string>{"asg", "seq-skip"}));
  const Program q = parse("x' = 1 for 2 ; x := 5");
  const Step stop = step(start(q, 1));
  EXPECT_EQ(names(stop.rules), (std::vector<std::string>{"diff-stop", "seq-stop"}));
  EXPECT_TRUE(std::holds_alternative<Stop>(stop.next.code));
}

TEST(Step, NestedSequenceUsesSeqRule) {
  const Program p = parse("if true then { x := 1 ; x := 2 } else { x := 3 } ; x := 4");
  Config c = start(p, 0);
  EXPECT_EQ(names(step(c).rules), (std::vector<std::string>{"if-true", "seq"}));
  c = step(c).next;
  const Step s = step(c);
  EXPECT_EQ(names(s.rules), (std::vector<std::string>{"asg", "seq-skip", "seq"}));
}

TEST(Step, TerminalAndNegativeTimeRejected) {
  const Program p = parse("x := 1");
  EXPECT_THROW(step(Config{Skip{}, Env(1), 0}), std::invalid_argument);
  EXPECT_THROW(step(start(p, -1)), std::invalid_argument);
}

TEST(Step, RedexSpan) {
  const Program p = parse("x := 1 ;\n  x' = 1 for 2");
  const Step s1 = step(start(p, 1));
  EXPECT_EQ(s1.redex.line, 1u);
  const Step s2 = step(s1.next);
  EXPECT_EQ(s2.redex.line, 2u);
  EXPECT_EQ(s2.redex.column, 3u);
}

TEST(ApplicableRules, ExactlyOne) {
  const Program p = parse("x := 0 ; while true { x := x + 1 ; wait 1 }");
  Config c = start(p, 2.5);
  for (int i = 0; i < 20 && !c.terminal(); ++i) {
    EXPECT_EQ(applicable_rules(c).size(), 1u);
    c = step(c).next;
  }
  EXPECT_TRUE(applicable_rules(Config{Stop{}, Env(1), 0}).empty());
}

TEST(Run, CounterAtHalf) {
  const Program p = parse("x := 0 ; while true { x := x + 1 ; wait 1 }");
  const RunResult r = run(p.root, Env(1), 0.5);
  ASSERT_TRUE(std::holds_alternative<AtTime>(r.outcome));
  EXPECT_EQ(std::get<AtTime>(r.outcome).env[0], 1.0);
  EXPECT_EQ(r.trace.total_steps, 4u);
  ASSERT_EQ(r.trace.entries.size(), 4u);
  EXPECT_EQ(names(r.trace.entries[1].rules), std::vector<std::string>{"wh-true"});
  EXPECT_EQ(r.trace.rule_counts[static_cast<std::size_t>(Rule::asg)], 2u);
}

TEST(Run, Terminated) {
  const Program p = parse("x := 5");
  const RunResult r = run(p.root, Env(1), 1);
  ASSERT_TRUE(std::holds_alternative<Terminated>(r.outcome));
  EXPECT_EQ(std::get<Terminated>(r.outcome).env[0], 5.0);
  EXPECT_EQ(std::get<Terminated>(r.outcome).duration, 0.0);

  const Program q = parse("x' = 1 for 2");
  const auto o = run(q.root, Env(1), 3).outcome;
  EXPECT_EQ(std::get<Terminated>(o).duration, 2.0);
}

TEST(Run, FuelAndTraceWindow) {
  const Program p = parse("x := 1 ; while true { wait x ; x := 0.5*x }");
  RunOptions o;
  o.fuel = 1000;
  o.trace_window = 10;
  const RunResult r = run(p.root, Env(1), 2.0, o);
  ASSERT_TRUE(std::holds_alternative<FuelExhausted>(r.outcome));
  EXPECT_FALSE(std::get<FuelExhausted>(r.outcome).timeout);
  EXPECT_EQ(r.trace.total_steps, 1000u);
  EXPECT_EQ(r.trace.entries.size(), 10u);
  EXPECT_EQ(r.trace.dropped, 990u);
}

TEST(Run, DeadlineReportsTimeout) {
  const Program p = parse("while true { x := x + 1 }");
  RunOptions o;
  o.fuel = 1'000'000'000;
  o.record_trace = false;
  o.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(20);
  const auto out = run(p.root, Env(1), 0, o).outcome;
  ASSERT_TRUE(std::holds_alternative<FuelExhausted>(out));
  EXPECT_TRUE(std::get<FuelExhausted>(out).timeout);
}

TEST(Run, ZenoAtOnePointNine) {
  const Program p = parse("x := 1 ; while true { wait x ; x := 0.5*x }");
  const auto out = run(p.root, Env(1), 1.9).outcome;
  ASSERT_TRUE(std::holds_alternative<AtTime>(out));
  EXPECT_EQ(std::get<AtTime>(out).env[0], 0.0625);
}
