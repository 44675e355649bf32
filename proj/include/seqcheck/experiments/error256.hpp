#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "seqcheck/experiments/config.hpp"
#include "seqcheck/experiments/report.hpp"
#include "seqcheck/metrics.hpp"
#include "seqcheck/placement.hpp"
#include "seqcheck/sim_cluster.hpp"

namespace seqcheck::experiments {

struct ErrorTrial {
  double multiplier = 0.0;
  std::uint32_t trial = 0;
  std::uint64_t data = 0;
  double max_error = 0.0;
  std::uint32_t worst_server = 0;
  double expected_sum = 0.0;
  std::uint64_t digest = 0;
};

/// One proportionality trial: free volumes uniform in [lo, hi) (held as
/// millionths), data count = total volume x multiplier, one fixed table.
inline ErrorTrial run_error_trial(const ScenarioConfig& c, double multiplier, std::uint32_t trial) {
  constexpr double kUnit = 1e6;
  SplitMix64 rng(mix64(c.seed, 1000 + trial));
  std::vector<FreeVolume> volumes(c.servers);
  for (auto& v : volumes) v = static_cast<FreeVolume>(rng.uniform(c.volume_lo, c.volume_hi) * kUnit);
  const auto table = reconfigure(ParamTable{}, volumes);
  const long double total = std::accumulate(volumes.begin(), volumes.end(), static_cast<long double>(0));

  ErrorTrial out;
  out.multiplier = multiplier;
  out.trial = trial;
  out.data = static_cast<std::uint64_t>(std::llround(total / kUnit * multiplier));
  std::vector<std::uint64_t> counts(c.servers, 0);
  const std::uint64_t base = workload_base(c.seed, 16 + trial);
  for (std::uint64_t i = 0; i < out.data; ++i) ++counts[find_writer(table, DataId(base + i)).index()];
  for (auto n : counts) out.digest = detail::fold(out.digest, n);

  std::vector<double> expected(c.servers);
  for (std::size_t s = 0; s < expected.size(); ++s)
    expected[s] = static_cast<double>(out.data * (volumes[s] / total));
  out.expected_sum = std::accumulate(expected.begin(), expected.end(), 0.0);
  out.max_error = max_relative_error(counts, expected);
  for (std::size_t s = 0; s < expected.size(); ++s)
    if (std::fabs(counts[s] - expected[s]) / expected[s] == out.max_error) out.worst_server = static_cast<std::uint32_t>(s);
  return out;
}

inline RunReport run_error256(const ScenarioConfig& c) {
  c.validate();
  if (c.trials > 200) throw ContractError("error256: at most 200 trials");
  std::vector<double> multipliers = c.multipliers.empty() ? std::vector<double>{1e6} : c.multipliers;
  for (auto& m : multipliers) m /= c.scale;
  std::sort(multipliers.begin(), multipliers.end());

  struct Job {
    double multiplier;
    std::uint32_t trial;
  };
  std::vector<Job> jobs;
  for (double m : multipliers)
    for (std::uint32_t t = 0; t < c.trials; ++t) jobs.push_back({m, t});
  const auto trials = parallel_indexed<ErrorTrial>(
      jobs.size(), [&](std::size_t i) { return run_error_trial(c, jobs[i].multiplier, jobs[i].trial); });

  RunReport r;
  r.experiment = "error256";
  CsvWriter csv({"multiplier", "trial", "data", "max_error", "worst_server"});
  bool sums_ok = true;
  std::uint64_t digest = 0;
  for (const auto& t : trials) {
    digest = detail::fold(digest, t.digest);
    csv.cell(t.multiplier).cell(t.trial).cell(t.data).cell(t.max_error).cell(t.worst_server);
    csv.end_row();
    sums_ok = sums_ok && std::fabs(t.expected_sum - static_cast<double>(t.data)) <= 1e-6 * t.data + 1e-6;
  }
  r.csv = csv.str();
  r.digest = digest;
  r.check("expected_shares_sum_to_data_count", "exact", sums_ok ? 1.0 : 0.0, sums_ok);

  std::vector<double> averages;
  for (double m : multipliers) {
    double sum = 0.0, lo = 1.0, hi = 0.0;
    for (const auto& t : trials) {
      if (t.multiplier != m) continue;
      sum += t.max_error;
      lo = std::min(lo, t.max_error);
      hi = std::max(hi, t.max_error);
    }
    const double avg = sum / c.trials;
    averages.push_back(avg);
    r.details["average_max_error"][fmt_num(m)] = avg;
    if (m >= 1e6) {
      r.check("average_max_error@" + fmt_num(m), "[0.25%, 0.50%]", avg, within(avg, 0.0025, 0.0050));
      r.check("trial_min_max_error@" + fmt_num(m), ">= 0.2%", lo, lo >= 0.002);
      r.check("trial_max_max_error@" + fmt_num(m), "<= 0.7%", hi, hi <= 0.007);
    }
  }
  if (averages.size() > 1) {
    bool shrinking = true;
    for (std::size_t i = 1; i < averages.size(); ++i) shrinking = shrinking && averages[i] < averages[i - 1];
    r.check("error_shrinks_with_multiplier", "monotone decrease", averages.back(), shrinking);
  }
  return r;
}

}  // namespace seqcheck::experiments
