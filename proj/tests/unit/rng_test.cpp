#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "absorb/rng.hpp"

using namespace absorb;

// Known-answer vectors published with Random123.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Stream, Reproducible) {
  Stream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
  EXPECT_EQ(a.draws(), 1000u);
}

TEST(Stream, ReplicatesAndSubstreamsDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint64_t r = 0; r < 200; ++r)
    for (std::uint32_t s = 0; s < 3; ++s) first.insert(Stream(1, r, s)());
  EXPECT_EQ(first.size(), 600u);
  EXPECT_NE(Stream(1, 0)(), Stream(2, 0)());
}

TEST(Stream, UniformRange) {
  Stream s(3, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform(), v = s.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    sum += u;
  }
  // mean 1/2, sd 1/√12
  EXPECT_NEAR(sum / n, 0.5, 4.0 / std::sqrt(12.0 * n));
}

TEST(Stream, BitBalance) {
  Stream s(11, 5);
  std::vector<int> ones(64, 0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto x = s();
    for (int b = 0; b < 64; ++b) ones[b] += (x >> b) & 1;
  }
  for (int b = 0; b < 64; ++b) EXPECT_NEAR(ones[b], n / 2, 4.5 * std::sqrt(n / 4.0)) << "bit " << b;
}
