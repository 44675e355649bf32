#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "seqcheck/prng.hpp"

using namespace seqcheck;

TEST(Mix64, MatchesReferenceSplitMix64Stream) {
  // First outputs of the published SplitMix64 generator seeded with 0.
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(g.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(g.next(), 0x06C45D188009454FULL);
}

TEST(Mix64, TwoKeyFormIsWhitenedSeedPlusStream) {
  for (std::uint64_t key : {0ULL, 1ULL, 123456789ULL}) {
    SplitMix64 g(mix64(key));
    for (std::uint64_t s = 0; s < 4; ++s) EXPECT_EQ(mix64(key, s), g.next());
  }
}

TEST(ToUnit, StaysInHalfOpenInterval) {
  EXPECT_EQ(to_unit(0), 0.0);
  EXPECT_LT(to_unit(std::numeric_limits<std::uint64_t>::max()), 1.0);
  EXPECT_EQ(to_unit(1ULL << 63), 0.5);
}

TEST(UnitRand, RejectsOutOfRange) {
  EXPECT_NO_THROW(UnitRand(0.0));
  EXPECT_THROW(UnitRand(1.0), ContractError);
  EXPECT_THROW(UnitRand(-0.25), ContractError);
  EXPECT_THROW(UnitRand(std::nan("")), ContractError);
}

TEST(MixRand, DeterministicAndInRange) {
  MixRand r;
  for (std::uint64_t d = 0; d < 10000; ++d) {
    const ServerNumber s(static_cast<std::uint32_t>(d % 300));
    const double v = r(s, DataId(d));
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
    ASSERT_EQ(v, r(s, DataId(d)));
    ASSERT_EQ(v, unit_rand(s, DataId(d)).value());
  }
}

TEST(MixRand, DiffersAcrossServersForOneId) {
  MixRand r;
  EXPECT_NE(r(ServerNumber(0), DataId(7)), r(ServerNumber(1), DataId(7)));
}

TEST(MixRand, ThresholdFrequencyWithinThreeSigma) {
  MixRand r;
  constexpr int n = 200000;
  for (double p : {0.01, 0.3, 0.5, 0.9}) {
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += r(ServerNumber(3), DataId(i)) < p;
    const double sigma = std::sqrt(n * p * (1 - p));
    EXPECT_NEAR(hits, n * p, 3 * sigma) << "p=" << p;
  }
}

TEST(MixRand, ChiSquareUniformPerServer) {
  MixRand r;
  constexpr int bins = 64, n = 200000;
  for (std::uint32_t s : {0u, 1u, 255u}) {
    std::vector<int> h(bins, 0);
    for (int i = 0; i < n; ++i) ++h[static_cast<int>(r(ServerNumber(s), DataId(i)) * bins)];
    double chi = 0;
    for (int c : h) chi += (c - double(n) / bins) * (c - double(n) / bins) / (double(n) / bins);
    const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(bins - 1), chi));
    EXPECT_GT(p, 0.001) << "server " << s;
  }
}

TEST(TableRand, ReturnsFixedValuesAndValidates) {
  TableRand t({0.1, 0.9});
  EXPECT_EQ(t(ServerNumber(1), DataId(42)), 0.9);
  EXPECT_THROW(t(ServerNumber(2), DataId(0)), std::out_of_range);
  EXPECT_THROW(TableRand({0.5, 1.0}), ContractError);
}

TEST(SplitMix64, BelowRespectsBound) {
  SplitMix64 g(9);
  for (std::uint64_t b : {1ULL, 2ULL, 7ULL, 1000ULL}) {
    for (int i = 0; i < 1000; ++i) ASSERT_LT(g.below(b), b);
  }
  EXPECT_EQ(g.below(0), 0u);
}
