#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <vector>

#include "hyb/kernels.hpp"

using namespace hyb::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d(0, 3);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST(Kernels, ScalarReference) {
  const std::vector<double> a{1, 2, 3, 4}, b{5, 6, 7, 8};
  std::vector<double> c(4), y(2);
  scalar::matmul(a.data(), b.data(), c.data(), 2);
  EXPECT_EQ(c, (std::vector<double>{19, 22, 43, 50}));
  scalar::matvec(a.data(), b.data(), y.data(), 2);
  EXPECT_EQ(y, (std::vector<double>{17, 39}));
  std::vector<double> z{1, 1, 1};
  scalar::axpy(2, std::vector<double>{1, 2, 3}.data(), z.data(), 3);
  EXPECT_EQ(z, (std::vector<double>{3, 5, 7}));
}

TEST(Kernels, ScalarAlwaysAvailable) {
  EXPECT_TRUE(isa_available(Isa::scalar));
  EXPECT_EQ(isa_name(Isa::scalar), "scalar");
}

#ifdef HYB_HAVE_AVX2
TEST(Kernels, Avx2BitIdenticalToScalar) {
  if (!isa_available(Isa::avx2)) GTEST_SKIP() << "CPU without AVX2";
  std::mt19937_64 rng(3);
  for (std::size_t n = 1; n <= 17; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto a = random_vec(rng, n * n), b = random_vec(rng, n * n), x = random_vec(rng, n);
      std::vector<double> c1(n * n), c2(n * n), y1(n), y2(n);
      scalar::matmul(a.data(), b.data(), c1.data(), n);
      avx2::matmul(a.data(), b.data(), c2.data(), n);
      ASSERT_EQ(c1, c2) << "n=" << n;
      scalar::matvec(a.data(), x.data(), y1.data(), n);
      avx2::matvec(a.data(), x.data(), y2.data(), n);
      ASSERT_EQ(y1, y2) << "n=" << n;
      auto z1 = random_vec(rng, n * n + 3), z2 = z1;
      const auto w = random_vec(rng, n * n + 3);
      scalar::axpy(0.37, w.data(), z1.data(), z1.size());
      avx2::axpy(0.37, w.data(), z2.data(), z2.size());
      ASSERT_EQ(z1, z2) << "n=" << n;
    }
  }
}

TEST(Kernels, DispatchFollowsForcedIsa) {
  if (!isa_available(Isa::avx2)) GTEST_SKIP() << "CPU without AVX2";
  const Isa before = active_isa();
  force_isa(Isa::avx2);
  EXPECT_EQ(active_isa(), Isa::avx2);
  force_isa(Isa::scalar);
  EXPECT_EQ(active_isa(), Isa::scalar);
  force_isa(before);
}
#endif

TEST(Kernels, DispatchedMatchesScalar) {
  std::mt19937_64 rng(5);
  const std::size_t n = 9;
  const auto a = random_vec(rng, n * n), b = random_vec(rng, n * n);
  std::vector<double> c1(n * n), c2(n * n);
  scalar::matmul(a.data(), b.data(), c1.data(), n);
  matmul(a.data(), b.data(), c2.data(), n);
  EXPECT_EQ(c1, c2);
}
