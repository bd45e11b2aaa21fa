#include <gtest/gtest.h>

#include <random>

#include "anneal_noise/prng.hpp"

using anneal_noise::Prng;

TEST(Prng, CanonicalFirstOutput) {
  Prng rng(5489);
  EXPECT_EQ(rng.next_u32(), 3499211612u);
}

TEST(Prng, MatchesStandardMt19937) {
  for (std::uint32_t seed : {0u, 1u, 42u, 5489u, 0xffffffffu}) {
    Prng rng(seed);
    std::mt19937 reference(seed);
    for (int i = 0; i < 5000; ++i) ASSERT_EQ(rng.next_u32(), reference()) << "seed " << seed;
  }
}

TEST(Prng, UnitIsWordOver2Pow32) {
  Prng a(99);
  Prng b(99);
  for (int i = 0; i < 1000; ++i) {
    const double expected = static_cast<double>(b.next_u32()) / 4294967296.0;
    ASSERT_EQ(a.next_unit(), expected);
  }
}

TEST(Prng, SymmetricIsTwiceUnitMinusOne) {
  Prng a(3);
  Prng b(3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_symmetric(), 2.0 * b.next_unit() - 1.0);
}

TEST(Prng, Ranges) {
  Prng rng(11);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double s = rng.next_symmetric();
    ASSERT_GE(s, -1.0);
    ASSERT_LT(s, 1.0);
  }
}

TEST(Prng, UnitMean) {
  Prng rng(2024);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += rng.next_unit();
  EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(Prng, EqualSeedsEqualStreams) {
  Prng a(777);
  Prng b(777);
  for (int i = 0; i < 10000; ++i) ASSERT_EQ(a.next_u32(), b.next_u32());
  EXPECT_EQ(a, b);
}

TEST(Prng, ReseedRestarts) {
  Prng rng(8);
  const auto first = rng.next_u32();
  rng.next_u32();
  rng.reseed(8);
  EXPECT_EQ(rng.next_u32(), first);
  EXPECT_EQ(rng.seed(), 8u);
}

TEST(Prng, CopiesContinueIdentically) {
  Prng a(12345);
  for (int i = 0; i < 700; ++i) a.next_u32();  // past one twist
  Prng b = a;
  for (int i = 0; i < 2000; ++i) ASSERT_EQ(a.next_u32(), b.next_u32());
}
