#include <gtest/gtest.h>

#include <cmath>

#include "hyb/denotational.hpp"
#include "hyb/parser.hpp"

using namespace hyb;

namespace {

DenResult at(const std::string& src, double t, std::uint64_t fuel = 1'000'000) {
  const Program p = parse(src);
  return sem_at(p.root, Env(p.vars.size()), t, DenOptions{fuel, 0.0, std::nullopt}).result;
}

}  // namespace

TEST(Denotational, ValueAndTermination) {
  const DenResult v = at("x := 1 ; x' = 2 for 3", 1.0);
  ASSERT_TRUE(std::holds_alternative<ValueAt>(v));
  EXPECT_EQ(std::get<ValueAt>(v).env[0], 3.0);
  const DenResult t = at("x := 5", 1.0);
  ASSERT_TRUE(std::holds_alternative<TerminatedAt>(t));
  EXPECT_EQ(std::get<TerminatedAt>(t).env[0], 5.0);
  EXPECT_EQ(std::get<TerminatedAt>(t).duration, 0.0);
}

TEST(Denotational, WaitThenAssignIsObservedBeforeTheAssignment) {
  const DenResult v = at("wait 1 ; x := 5", 0.5);
  ASSERT_TRUE(std::holds_alternative<ValueAt>(v));
  EXPECT_EQ(std::get<ValueAt>(v).env[0], 0.0);
}

TEST(Denotational, Counter) {
  const DenResult v = at("x := 0 ; while true { x := x + 1 ; wait 1 }", 0.5);
  ASSERT_TRUE(std::holds_alternative<ValueAt>(v));
  EXPECT_EQ(std::get<ValueAt>(v).env[0], 1.0);
}

TEST(Denotational, Zeno) {
  const std::string src = "x := 1 ; while true { wait x ; x := 0.5*x }";
  const DenResult v = at(src, 1.9);
  ASSERT_TRUE(std::holds_alternative<ValueAt>(v));
  EXPECT_EQ(std::get<ValueAt>(v).env[0], 0.0625);
  EXPECT_TRUE(std::holds_alternative<DenFuelExhausted>(at(src, 2.0, 10'000)));
}

TEST(Denotational, UnfoldEconomy) {
  const Env env(std::vector<double>{0.0});
  const UnfoldCheck half = example_unfold_check(env, 0.5, 1);
  EXPECT_TRUE(half.ok);
  EXPECT_EQ(half.unfoldings, 1u);
  EXPECT_EQ(half.value[0], 1.0);
  const UnfoldCheck later = example_unfold_check(env, 1.5, 2);
  EXPECT_TRUE(later.ok);
  EXPECT_EQ(later.unfoldings, 2u);
  EXPECT_EQ(later.value[0], 2.0);
  EXPECT_FALSE(example_unfold_check(env, 1.5, 1).ok);
}

TEST(Denotational, DenoteIsLazyUpToTheHorizon) {
  const Program p = parse("x := 0 ; while true { x := x + 1 ; wait 1 }");
  FuelMeter meter(1'000'000);
  const Denotation d = denote(p.root, Env(1), Demand{3.5, &meter});
  ASSERT_NE(d.pending(), nullptr);
  EXPECT_GE(d.trajectory().total(), 3.5);
  EXPECT_EQ(meter.unfoldings(), 4u);
}

TEST(Trace, CruiseSamples) {
  const Program p = parse("v := 5 ; while true { if v <= 10 then { v' = 1 for 1 } else { v' = -1 for 1 } }");
  const Trace tr = sem_trace(p.root, Env(1), 12, 121);
  ASSERT_EQ(tr.points.size(), 121u);
  EXPECT_EQ(tr.points.front().t, 0.0);
  EXPECT_EQ(tr.points.back().t, 12.0);
  for (const auto& pt : tr.points) {
    ASSERT_TRUE(pt.env.has_value());
    const double want = pt.t <= 5 ? 5 + pt.t : 11 - std::abs(std::fmod(pt.t - 5, 2.0) - 1.0);
    EXPECT_NEAR((*pt.env)[0], want, 1e-9) << pt.t;
  }
  EXPECT_TRUE(tr.markers.empty());
}

TEST(Trace, TerminationMarker) {
  const Program p = parse("x' = 1 for 2");
  const Trace tr = sem_trace(p.root, Env(1), 4, 5);
  ASSERT_EQ(tr.markers.size(), 1u);
  EXPECT_EQ(tr.markers[0].kind, Marker::terminated);
  EXPECT_EQ(tr.markers[0].t, 2.0);
  EXPECT_EQ(tr.points[2].marker, Marker::terminated);
  EXPECT_EQ((*tr.points[4].env)[0], 2.0);
}

TEST(Trace, ZenoFuelMarker) {
  const Program p = parse("x := 1 ; while true { wait x ; x := 0.5*x }");
  const Trace tr = sem_trace(p.root, Env(1), 3, 31, DenOptions{10'000, 0.0, std::nullopt});
  ASSERT_FALSE(tr.markers.empty());
  EXPECT_EQ(tr.markers.back().kind, Marker::fuel);
  EXPECT_TRUE(tr.points[10].env.has_value());
  EXPECT_FALSE(tr.points[30].env.has_value());
  EXPECT_EQ(tr.points[30].marker, Marker::fuel);
}

TEST(Trace, RejectsBadRanges) {
  const Program p = parse("x := 1");
  EXPECT_THROW(sem_trace(p.root, Env(1), 1, 1), std::invalid_argument);
  EXPECT_THROW(sem_trace(p.root, Env(1), 0, 10), std::invalid_argument);
}
