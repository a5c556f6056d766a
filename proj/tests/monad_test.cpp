#include <gtest/gtest.h>

#include <map>

#include "hyb/harness.hpp"
#include "hyb/hybrid_monad.hpp"

using namespace hyb;

namespace {

using Tr = Trajectory<int>;
using H = HElem<int, int>;
using E = Either<int, int>;

Tr seg(int v, double d) { return Tr::constant(v, d); }

}  // namespace

TEST(Either, Basics) {
  const E l = E::left(1), r = E::right(2);
  EXPECT_TRUE(l.is_left());
  EXPECT_FALSE(r.is_left());
  EXPECT_EQ(r.right_value(), 2);
  EXPECT_FALSE(l == r);
  EXPECT_TRUE(l == E::left(1));
}

TEST(Monad, UnitAndAction) {
  const H u = unit<int>(7);
  ASSERT_NE(u.converged(), nullptr);
  EXPECT_TRUE(u.trajectory().empty());
  const H m = prepend(seg(1, 2.0), u);
  EXPECT_EQ(m.trajectory().total(), 2.0);
  EXPECT_EQ(m.converged()->value, 7);
}

TEST(Monad, KleisliConcatenatesTrajectories) {
  const H m = Converged<int, int>{seg(1, 1.0), 5};
  auto f = [](int x) -> H { return Converged<int, int>{seg(x, 2.0), x + 1}; };
  const H r = kleisli(f, m);
  ASSERT_NE(r.converged(), nullptr);
  EXPECT_EQ(r.trajectory().total(), 3.0);
  EXPECT_EQ(r.trajectory().at(1.5), 5);
  EXPECT_EQ(r.converged()->value, 6);
}

TEST(Monad, KleisliOnDivergenceIsIdentity) {
  const H m = Divergent<int>{seg(1, 1.0), Closure::closed, 4, DivCause::semantic};
  const H r = kleisli([](int) -> H { return unit<int>(0); }, m);
  ASSERT_NE(r.divergent(), nullptr);
  EXPECT_EQ(r.divergent()->endpoint, 4);
}

TEST(Monad, BindIsPendingPastTheHorizon) {
  const H m = Converged<int, int>{seg(1, 3.0), 5};
  int calls = 0;
  auto f = [&](int x, const Demand&) -> H {
    ++calls;
    return unit<int>(x);
  };
  const H r = bind(m, f, Demand{2.0, nullptr});
  EXPECT_NE(r.pending(), nullptr);
  EXPECT_EQ(calls, 0);
  const H full = r.pending()->resume(Demand{});
  EXPECT_NE(full.converged(), nullptr);
  EXPECT_EQ(calls, 1);
}

TEST(Elgot, CountsUnfoldings) {
  // x -> inr (x+1) after one time unit, exits at 3
  auto f = [](const int& x, const Demand&) -> HElem<int, Either<int, int>> {
    if (x >= 3) return unit<int>(Either<int, int>::left(x));
    return Converged<int, Either<int, int>>{seg(x, 1.0), Either<int, int>::right(x + 1)};
  };
  FuelMeter meter(100);
  const H r = elgot<int>(f, 0, Demand{std::numeric_limits<double>::infinity(), &meter});
  ASSERT_NE(r.converged(), nullptr);
  EXPECT_EQ(r.converged()->value, 3);
  EXPECT_EQ(r.trajectory().total(), 3.0);
  EXPECT_EQ(r.trajectory().at(2.5), 2);
  EXPECT_EQ(meter.unfoldings(), 4u);
}

TEST(Elgot, InstantSelfLoopIsEmptyOpenDivergence) {
  auto f = [](const int& x, const Demand&) -> HElem<int, Either<int, int>> {
    return unit<int>(Either<int, int>::right(x));
  };
  FuelMeter meter(1000);
  const H r = elgot<int>(f, 0, Demand{1.0, &meter});
  ASSERT_NE(r.divergent(), nullptr);
  EXPECT_TRUE(r.trajectory().empty());
  EXPECT_EQ(r.divergent()->closure, Closure::open);
  EXPECT_EQ(r.divergent()->cause, DivCause::fuel);
  EXPECT_TRUE(meter.exhausted());
}

TEST(Elgot, StopsAtTheHorizon) {
  auto f = [](const int& x, const Demand&) -> HElem<int, Either<int, int>> {
    return Converged<int, Either<int, int>>{seg(x, 1.0), Either<int, int>::right(x + 1)};
  };
  FuelMeter meter(1000);
  const H r = elgot<int>(f, 0, Demand{2.5, &meter});
  ASSERT_NE(r.pending(), nullptr);
  EXPECT_EQ(r.trajectory().total(), 3.0);
  EXPECT_EQ(meter.unfoldings(), 3u);
}

TEST(IotaTau, Examples) {
  const H conv = unit<int>(3);
  EXPECT_TRUE(iota(conv).is_left());
  const H run = Converged<int, int>{seg(9, 1.0), 3};
  EXPECT_EQ(iota(run).right_value().left_value(), 9);
  EXPECT_FALSE(iota(H(Divergent<int>{})).right_value().is_left());

  using HS = HElem<Either<int, int>, int>;
  Trajectory<Either<int, int>> tr;
  tr.append(Trajectory<Either<int, int>>::constant(Either<int, int>::left(1), 1.0));
  tr.append(Trajectory<Either<int, int>>::constant(Either<int, int>::right(0), 1.0));
  const HS m = Converged<Either<int, int>, int>{tr, 5};
  const H cut = tau(m);
  ASSERT_NE(cut.divergent(), nullptr);
  EXPECT_EQ(cut.trajectory().total(), 1.0);
  EXPECT_EQ(cut.divergent()->closure, Closure::open);
}

TEST(Theta, RoundTrip) {
  const H closed = Divergent<int>{seg(1, 1.0), Closure::closed, 4, DivCause::semantic};
  const HClassic<int> h = theta(closed);
  EXPECT_FALSE(h.convergent);
  EXPECT_EQ(h.endpoint, 4);
  EXPECT_TRUE(observably_equal(theta_inv(h), closed));
  EXPECT_THROW(theta(H(Pending<int, int>{seg(1, 1.0), nullptr})), std::invalid_argument);
}

TEST(ObservablyEqual, ComparesUpToTheHorizon) {
  const H a = Pending<int, int>{seg(1, 3.0), nullptr};
  const H b = Pending<int, int>{concat(seg(1, 2.0), seg(7, 2.0)), nullptr};
  EXPECT_TRUE(observably_equal(a, b, 1.5));
  EXPECT_FALSE(observably_equal(a, b));
  EXPECT_FALSE(observably_equal(a, H(Converged<int, int>{seg(1, 3.0), 0}), 1.5));
}

TEST(LawSuites, AllLawsHold) {
  const LawReport r = run_law_suites(99, 300);
  for (const auto& l : r.laws) EXPECT_EQ(l.failed, 0u) << l.suite << "/" << l.law << ": " << l.first_failure;
  EXPECT_TRUE(r.all_passed());
  EXPECT_GE(r.laws.size(), 20u);
}

TEST(LawSuites, EveryCaseBranchIsExercised) {
  const LawReport r = run_law_suites(99, 300);
  std::map<std::string, std::uint64_t> seen(r.branches.begin(), r.branches.end());
  for (const char* b : {"tau: empty trajectory", "tau: right hit in m", "tau: divergent m", "tau: all left",
                        "tau: right hit in f(x)", "theta: I' = I", "theta: I' != I"}) {
    EXPECT_GT(seen[b], 0u) << b;
  }
}

class Mutants : public ::testing::TestWithParam<Mutation> {};

TEST_P(Mutants, AreCaughtByTheirSuite) {
  const Mutation m = GetParam();
  const LawReport r = run_law_suites(99, 300, m);
  EXPECT_GT(r.failures(mutation_suite(m)), 0u) << mutation_name(m);
}

INSTANTIATE_TEST_SUITE_P(Laws, Mutants,
                         ::testing::Values(Mutation::concat_drops_segment, Mutation::kleisli_drops_prefix,
                                           Mutation::action_wrong_side, Mutation::iota_last_point,
                                           Mutation::tau_keeps_converged, Mutation::tau_filters_right,
                                           Mutation::theta_drops_endpoint, Mutation::elgot_drops_prefix));
