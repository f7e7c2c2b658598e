#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "sact/rng.hpp"

using namespace sact;

TEST(Rng, SameSeedSameIntegerSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, KnownMt19937_64Output) {
  // mt19937_64's sequence is pinned by the standard; seed 5489 is the
  // reference default and its 10000th draw is a published constant.
  std::mt19937_64 ref(5489u);
  Rng rng(5489u);
  std::uint64_t last = 0;
  for (int i = 0; i < 10000; ++i) last = rng.next_u64();
  for (int i = 0; i < 9999; ++i) ref();
  EXPECT_EQ(last, ref());
  EXPECT_EQ(last, 9981545732273789042ULL);
}

TEST(Rng, UniformIntRangeAndDeterminism) {
  Rng a(9), b(9);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t x = a.uniform_int(7);
    ASSERT_LT(x, 7u);
    ASSERT_EQ(x, b.uniform_int(7));
  }
}

TEST(Rng, UniformRealInHalfOpenUnit) {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMomentsRoughlyStandard) {
  Rng rng(123);
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.03);
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(SeedDerivation, DistinctTokensDistinctStreams) {
  const std::uint64_t a = derive_seed(7, "train", 0);
  const std::uint64_t b = derive_seed(7, "train", 1);
  const std::uint64_t c = derive_seed(7, "shuffle", 0);
  EXPECT_NE(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a, derive_seed(7, "train", 0));
}

TEST(SeedDerivation, OrderSensitive) {
  SeedDeriver d1(1), d2(1);
  d1.absorb("x").absorb("y");
  d2.absorb("y").absorb("x");
  EXPECT_NE(d1.seed(), d2.seed());
}

TEST(Rng, ShuffleIsSeededPermutation) {
  std::vector<int> v1{0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<int> v2 = v1;
  Rng a(55), b(55);
  a.shuffle(v1);
  b.shuffle(v2);
  EXPECT_EQ(v1, v2);
  std::vector<int> sorted = v1;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));
}
