#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "seqcheck/experiments/config.hpp"
#include "seqcheck/experiments/report.hpp"
#include "seqcheck/sim_cluster.hpp"

namespace seqcheck::experiments {

/// Varying free volumes. Event order per round:
///   1. every present server gets a fresh free volume drawn from [0, 1)
///      (in millionths), and the parameters are recomputed;
///   2. floor(sum of drawn volumes x multiplier) datums are written;
///   3. after every `rounds_per_add` rounds a server is added, up to
///      `servers`; it takes part from the next round on.
/// Per server, total written is compared with multiplier x total volume.
inline RunReport run_table2(const ScenarioConfig& c) {
  c.validate();
  constexpr double kUnit = 1e6;
  const double multiplier = (c.multipliers.empty() ? 100'000.0 : c.multipliers.front()) / c.scale;
  SplitMix64 rng(mix64(c.seed, 2));
  StreamCluster cluster(workload_base(c.seed, 2), OverflowPolicy::allow);
  for (std::uint32_t i = 0; i < c.initial_servers; ++i) cluster.add_server(0);

  std::vector<double> unused_sum(c.servers, 0.0);
  for (std::uint32_t round = 0; round < c.rounds; ++round) {
    double drawn = 0.0;
    for (std::size_t s = 0; s < cluster.server_count(); ++s) {
      const ServerNumber sn(static_cast<std::uint32_t>(s));
      const auto micro = static_cast<Bytes>(rng.uniform() * kUnit);
      cluster.set_capacity(sn, cluster.used(sn) + micro);
      unused_sum[s] += micro / kUnit;
      drawn += micro / kUnit;
    }
    cluster.reconfigure();
    const auto writes = static_cast<std::uint64_t>(std::floor(drawn * multiplier));
    for (std::uint64_t i = 0; i < writes; ++i) cluster.append(1);
    if ((round + 1) % c.rounds_per_add == 0 && cluster.server_count() < c.servers) cluster.add_server(0);
  }

  RunReport r;
  r.experiment = "table2";
  CsvWriter csv({"server", "write_p", "read_p", "total_unused", "total_written", "expected", "rel_error"});
  const double tol = 0.01 * std::sqrt(c.scale);
  double worst = 0.0;
  bool read_ge_write = true;
  const auto& params = cluster.params();
  for (std::size_t s = 0; s < params.size(); ++s) {
    const ServerNumber sn(static_cast<std::uint32_t>(s));
    const double expected = unused_sum[s] * multiplier;
    const auto written = cluster.stored_count(sn);
    const double err = expected > 0 ? (static_cast<double>(written) - expected) / expected : 0.0;
    worst = std::max(worst, std::fabs(err));
    read_ge_write = read_ge_write && params.read_p(sn) >= params.write_p(sn);
    csv.cell(static_cast<std::uint64_t>(s)).cell(params.write_p(sn)).cell(params.read_p(sn));
    csv.cell(unused_sum[s]).cell(written).cell(expected).cell(err);
    csv.end_row();
  }
  r.csv = csv.str();
  r.digest = cluster.digest();
  if (c.rounds > 0) {
    r.check("written_vs_unused", "<= " + pct(tol) + " relative", worst, worst <= tol);
    r.check("read_p_ge_write_p", "true", read_ge_write ? 1.0 : 0.0, read_ge_write);
  }
  return r;
}

}  // namespace seqcheck::experiments
