#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "seqcheck/placement.hpp"

using namespace seqcheck;

namespace {

// Independent oracle: prefix sums recomputed from scratch for each server in
// long double.
std::vector<double> oracle_write_p(const std::vector<FreeVolume>& v) {
  std::vector<double> out;
  for (std::size_t y = 0; y < v.size(); ++y) {
    long double prefix = 0;
    for (std::size_t i = 0; i <= y; ++i) prefix += v[i];
    if (prefix == 0) out.push_back(y == 0 ? 1.0 : 0.0);
    else out.push_back(static_cast<double>(v[y] / prefix));
  }
  return out;
}

ParamTable fig1_table() {
  return ParamTable::from_vectors({1.00, 0.50, 0.33, 0.25, 0.20, 0.17, 0.14},
                                  {1.00, 0.67, 0.40, 0.32, 0.37, 0.17, 0.20});
}

const TableRand kFig1Rand({0.81, 0.73, 0.24, 0.37, 0.55, 0.12, 0.18});

}  // namespace

TEST(ComputeWriteP, MatchesPrefixSumOracle) {
  SplitMix64 g(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FreeVolume> v(1 + g.below(40));
    for (auto& x : v) x = g.below(4) == 0 ? 0 : g.below(1'000'000'000'000ULL);
    const auto got = compute_write_p(v);
    const auto want = oracle_write_p(v);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-15) << trial << ":" << i;
  }
}

TEST(ComputeWriteP, EqualVolumesGiveHarmonicSeries) {
  const std::vector<FreeVolume> v(6, 100 * kTB);
  const auto p = compute_write_p(v);
  const double want[] = {1.000, 0.500, 0.333, 0.250, 0.200, 0.167};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(std::round(p[i] * 1000) / 1000, want[i]);
    EXPECT_DOUBLE_EQ(p[i], 1.0 / (i + 1));
  }
}

TEST(ComputeWriteP, ZeroPrefixRules) {
  EXPECT_EQ(compute_write_p(std::vector<FreeVolume>{0, 0, 5}), (std::vector<double>{1.0, 0.0, 1.0}));
  EXPECT_EQ(compute_write_p(std::vector<FreeVolume>{0}), (std::vector<double>{1.0}));
  EXPECT_EQ(compute_write_p(std::vector<FreeVolume>{4, 0}), (std::vector<double>{1.0, 0.0}));
  EXPECT_TRUE(compute_write_p(std::vector<FreeVolume>{}).empty());
}

TEST(ComputeWriteP, HugeVolumesDoNotOverflow) {
  const FreeVolume half = 1ULL << 63;
  EXPECT_EQ(compute_write_p(std::vector<FreeVolume>{half, half}), (std::vector<double>{1.0, 0.5}));
}

TEST(UpdateReadP, KeepsRunningMaximum) {
  ParamTable t = reconfigure(ParamTable{}, std::vector<FreeVolume>{10, 10});
  EXPECT_EQ(t.epoch(), 1u);
  t = update_read_p(t, std::vector<double>{1.0, 0.2, 0.9});
  EXPECT_DOUBLE_EQ(t.read_p(ServerNumber(1)), 0.5);
  EXPECT_DOUBLE_EQ(t.read_p(ServerNumber(2)), 0.9);
  t = update_read_p(t, std::vector<double>{1.0, 0.7, 0.1});
  EXPECT_DOUBLE_EQ(t.read_p(ServerNumber(1)), 0.7);
  EXPECT_DOUBLE_EQ(t.read_p(ServerNumber(2)), 0.9);
  EXPECT_EQ(t.epoch(), 3u);
}

TEST(UpdateReadP, RejectsShrinkingVector) {
  const ParamTable t = reconfigure(ParamTable{}, std::vector<FreeVolume>{1, 1});
  EXPECT_THROW(update_read_p(t, std::vector<double>{1.0}), ShrinkingTable);
  EXPECT_THROW(reconfigure(t, std::vector<FreeVolume>{1}), ShrinkingTable);
}

TEST(ParamTable, ValidatesInvariants) {
  EXPECT_THROW(ParamTable::from_vectors({1.0, 0.5}, {1.0}), ContractError);
  EXPECT_THROW(ParamTable::from_vectors({1.0, 0.5}, {1.0, 0.4}), ContractError);
  EXPECT_THROW(ParamTable::from_vectors({0.9}, {0.9}), ContractError);
  EXPECT_THROW(ParamTable::from_vectors({1.0, 1.5}, {1.0, 1.5}), ContractError);
  EXPECT_THROW(ParamTable::from_vectors({1.0, std::nan("")}, {1.0, 1.0}), ContractError);
  EXPECT_NO_THROW(fig1_table());
}

TEST(SelectWriter, Fig1Trace) {
  const auto d = select_writer(fig1_table(), DataId(0), kFig1Rand);
  EXPECT_EQ(d.writer, ServerNumber(5));
  EXPECT_EQ(d.invalidate, std::vector<ServerNumber>{ServerNumber(6)});
  EXPECT_EQ(find_writer(fig1_table(), DataId(0), kFig1Rand), ServerNumber(5));
}

TEST(SelectReadCandidates, Fig1Trace) {
  const auto c = select_read_candidates(fig1_table(), DataId(0), kFig1Rand);
  const std::vector<ServerNumber> want{ServerNumber(6), ServerNumber(5), ServerNumber(2), ServerNumber(0)};
  EXPECT_EQ(c, want);
  const auto pc = count_probes(fig1_table(), DataId(0), ServerNumber(5), kFig1Rand);
  EXPECT_EQ(pc.candidates, 4u);
  EXPECT_EQ(pc.position, 2u);
  EXPECT_EQ(count_probes(fig1_table(), DataId(0), ServerNumber(4), kFig1Rand).position, 0u);
}

TEST(SelectWriter, EmptyTableIsContractError) {
  EXPECT_THROW(select_writer(ParamTable{}, DataId(1)), ContractError);
  EXPECT_THROW(select_read_candidates(ParamTable{}, DataId(1)), ContractError);
  EXPECT_THROW(find_writer(ParamTable{}, DataId(1)), NoWriter);
}

TEST(SelectWriter, NoWriterWhenEveryServerRetired) {
  ParamTable t = reconfigure(ParamTable{}, std::vector<FreeVolume>{5});
  t = retire_server(t, ServerNumber(0), std::vector<FreeVolume>{5});
  EXPECT_THROW(select_writer(t, DataId(1)), NoWriter);
  EXPECT_TRUE(select_read_candidates(t, DataId(1)).empty());
}

TEST(SelectWriter, InvalidationSetIsExactlyHigherReaders) {
  // Oracle: brute-force definition against the same draws.
  ParamTable t = reconfigure(ParamTable{}, std::vector<FreeVolume>{50, 30, 20, 10});
  t = reconfigure(t, std::vector<FreeVolume>{5, 60, 1, 90});
  MixRand r;
  for (std::uint64_t id = 0; id < 5000; ++id) {
    const auto d = select_writer(t, DataId(id));
    std::uint32_t w = 0;
    for (std::uint32_t s = 0; s < t.size(); ++s)
      if (t.write_p(ServerNumber(s)) > r(ServerNumber(s), DataId(id))) w = s;
    ASSERT_EQ(d.writer.value, w);
    std::vector<ServerNumber> inv;
    for (std::uint32_t s = t.size() - 1; s > w; --s)
      if (t.read_p(ServerNumber(s)) > r(ServerNumber(s), DataId(id))) inv.push_back(ServerNumber(s));
    ASSERT_EQ(d.invalidate, inv);
    ASSERT_TRUE(is_read_candidate(t, d.writer, DataId(id)));
  }
}

TEST(SelectWriter, FrequencyProportionalToFreeVolume) {
  const std::vector<FreeVolume> v{3, 1, 2, 4};
  const ParamTable t = reconfigure(ParamTable{}, v);
  constexpr int n = 200000;
  std::vector<int> hits(v.size(), 0);
  for (int i = 0; i < n; ++i) ++hits[find_writer(t, DataId(i)).index()];
  for (std::size_t s = 0; s < v.size(); ++s) {
    const double p = v[s] / 10.0;
    EXPECT_NEAR(hits[s], n * p, 3 * std::sqrt(n * p * (1 - p))) << "server " << s;
  }
}

TEST(RetireServer, ZeroesVictimAndPromotesNext) {
  ParamTable t = reconfigure(ParamTable{}, std::vector<FreeVolume>{10, 10, 10});
  t = retire_server(t, ServerNumber(0), std::vector<FreeVolume>{10, 10, 10});
  EXPECT_TRUE(t.is_retired(ServerNumber(0)));
  EXPECT_EQ(t.write_p(ServerNumber(0)), 0.0);
  EXPECT_EQ(t.read_p(ServerNumber(0)), 0.0);
  EXPECT_EQ(t.write_p(ServerNumber(1)), 1.0);
  EXPECT_DOUBLE_EQ(t.write_p(ServerNumber(2)), 0.5);
  // Still retired after further epochs.
  t = reconfigure(t, std::vector<FreeVolume>{10, 10, 10, 10});
  EXPECT_EQ(t.read_p(ServerNumber(0)), 0.0);
  EXPECT_THROW(retire_server(t, ServerNumber(9), std::vector<FreeVolume>(4, 1)), ContractError);
}
