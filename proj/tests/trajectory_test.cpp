#include <gtest/gtest.h>

#include "hyb/trajectory.hpp"

using namespace hyb;

namespace {

using Tr = Trajectory<int>;

Tr steps(std::initializer_list<std::pair<int, double>> segs) {
  Tr tr;
  for (auto [v, d] : segs) tr.append(Tr::constant(v, d));
  return tr;
}

}  // namespace

TEST(Trajectory, AtUsesHalfOpenSegments) {
  const Tr tr = steps({{1, 1.0}, {2, 0.5}});
  EXPECT_EQ(tr.total(), 1.5);
  EXPECT_EQ(tr.at(0.0), 1);
  EXPECT_EQ(tr.at(0.999), 1);
  EXPECT_EQ(tr.at(1.0), 2);
  EXPECT_THROW(tr.at(1.5), OutOfDomain);
  EXPECT_THROW(tr.at(-0.1), OutOfDomain);
  EXPECT_TRUE(tr.covers(1.49));
  EXPECT_FALSE(tr.covers(1.5));
}

TEST(Trajectory, AppendRules) {
  Tr tr;
  tr.append(Tr::constant(3, 0.0));
  EXPECT_TRUE(tr.empty());
  EXPECT_THROW(tr.append(Segment<int>{-1.0, nullptr}), std::invalid_argument);
  EXPECT_THROW(tr.append(Segment<int>{std::numeric_limits<double>::infinity(), nullptr}), std::invalid_argument);
  EXPECT_FALSE(tr.initial().has_value());
}

TEST(Trajectory, RemainingAfter) {
  const Tr tr = steps({{1, 1.0}, {2, 0.5}});
  EXPECT_FALSE(tr.remaining_after(1.2).has_value());
  EXPECT_EQ(tr.remaining_after(1.5), 0.0);
  EXPECT_EQ(tr.remaining_after(4.0), 2.5);
}

TEST(Trajectory, ConcatAndTruncate) {
  const Tr a = steps({{1, 1.0}}), b = steps({{2, 2.0}, {3, 1.0}});
  const Tr ab = concat(a, b);
  EXPECT_EQ(ab.total(), 4.0);
  EXPECT_EQ(ab.at(2.5), 2);
  EXPECT_EQ(ab.at(3.5), 3);
  const Tr cut = ab.truncate(2.0);
  EXPECT_EQ(cut.total(), 2.0);
  EXPECT_EQ(cut.segments().size(), 2u);
  EXPECT_THROW(ab.truncate(5.0), OutOfDomain);
  EXPECT_TRUE(ab.truncate(0.0).empty());
}

TEST(Trajectory, Map) {
  const Tr tr = steps({{1, 1.0}, {2, 1.0}});
  const auto doubled = tr.map([](int v) { return 2.0 * v; });
  EXPECT_EQ(doubled.at(1.5), 4.0);
  EXPECT_EQ(doubled.total(), 2.0);
}

TEST(Trajectory, FlowSegments) {
  LinSys s;
  s.n = 1;
  s.a = {0};
  s.b = {2};
  s.zero = false;
  Trajectory<Env> tr;
  tr.append(Segment<Env>{1.0, std::make_shared<FlowLaw>(FlowFn(s, Env(std::vector<double>{1})))});
  EXPECT_EQ(tr.at(0.25)[0], 1.5);
}

TEST(Probes, EqualityAndPrefix) {
  const Tr a = steps({{1, 1.0}, {2, 1.0}});
  const Tr b = steps({{1, 0.5}, {1, 0.5}, {2, 1.0}});
  EXPECT_TRUE(probe_equal(a, b));
  const Tr c = steps({{1, 1.0}, {5, 1.0}});
  EXPECT_FALSE(probe_equal(a, c));
  const Tr prefix = steps({{1, 1.0}});
  EXPECT_TRUE(prefix_le(prefix, a, make_probes(prefix, a, prefix.total(), 1)));
  EXPECT_FALSE(prefix_le(a, prefix, make_probes(a, prefix, a.total(), 1)));
}

TEST(Probes, CloseValues) {
  EXPECT_TRUE(close_values(1.0, 1.0 + 1e-12));
  EXPECT_FALSE(close_values(1.0, 1.0 + 1e-6));
  EXPECT_TRUE(close_values(std::nan(""), std::nan("")));
  EXPECT_TRUE(close_values(0.0, 1e-300));
}
