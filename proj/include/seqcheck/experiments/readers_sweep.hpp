#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "seqcheck/experiments/config.hpp"
#include "seqcheck/experiments/report.hpp"
#include "seqcheck/sim_cluster.hpp"

namespace seqcheck::experiments {

/// Read cost of one growth scenario after the cluster has filled up.
struct SweepPoint {
  double threshold = 0.0;
  std::uint32_t max_servers = 0;
  std::uint64_t data = 0;
  std::uint64_t pre_expansion_data = 0;
  std::uint64_t expansions = 0;
  double mean_candidates = 0.0;
  double mean_probes_all = 0.0;
  double mean_probes_pre = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t digest = 0;
};

/// Grows a cluster under `policy` until it is full, then reads every datum.
///
/// Writes are never rejected: a write landing on a server that is already
/// full is counted against it anyway, and the run ends once the bytes
/// written reach the total capacity of the saturated cluster. Before each
/// write the cluster expands while the fill threshold is met. "Pre-expansion"
/// data are those written before the last expansion event.
inline SweepPoint run_growth_scenario(const ExpansionPolicy& policy, Bytes datum_size, std::uint64_t id_base) {
  StreamCluster cluster(id_base, OverflowPolicy::allow);
  bootstrap(cluster, policy);
  SweepPoint pt;
  pt.threshold = policy.threshold;
  pt.max_servers = policy.max_servers;
  cluster.reserve(static_cast<std::size_t>(
      static_cast<long double>(policy.max_volume) * policy.max_servers / datum_size + 1));
  std::uint64_t last_expansion = 0;
  for (;;) {
    if (const auto n = apply_expansion_policy(cluster, policy); n > 0) {
      pt.expansions += n;
      last_expansion = cluster.written();
    }
    if (cluster.used_total() + datum_size > cluster.capacity_total()) break;
    cluster.append(datum_size);
  }
  pt.data = cluster.written();
  pt.pre_expansion_data = last_expansion;
  long double cand = 0, all = 0, pre = 0;
  for (std::uint64_t i = 0; i < pt.data; ++i) {
    const auto st = cluster.read_stats(i);
    cand += st.candidates_counted;
    all += st.probes_until_hit;
    if (i < last_expansion) pre += st.probes_until_hit;
  }
  if (pt.data > 0) {
    pt.mean_candidates = static_cast<double>(cand / pt.data);
    pt.mean_probes_all = static_cast<double>(all / pt.data);
  }
  if (last_expansion > 0) pt.mean_probes_pre = static_cast<double>(pre / last_expansion);
  pt.digest = cluster.digest();
  return pt;
}

inline ExpansionPolicy sweep_policy(const ScenarioConfig& c, double threshold, std::uint32_t max_servers) {
  ExpansionPolicy p;
  p.threshold = threshold;
  p.initial_volume = c.scaled(c.initial_volume);
  p.increment = c.scaled(c.increment);
  p.max_volume = c.scaled(c.max_volume);
  p.max_servers = max_servers;
  return p;
}

inline RunReport run_readers_sweep(const ScenarioConfig& c) {
  c.validate();
  struct Job {
    double threshold;
    std::uint32_t max_servers;
  };
  std::vector<Job> jobs;
  for (double n : c.thresholds)
    for (auto m : c.max_servers) jobs.push_back({n, m});

  const auto points = parallel_indexed<SweepPoint>(jobs.size(), [&](std::size_t i) {
    return run_growth_scenario(sweep_policy(c, jobs[i].threshold, jobs[i].max_servers), c.datum_size,
                               workload_base(c.seed, 0));
  });

  RunReport r;
  r.experiment = "readers-sweep";
  CsvWriter csv({"threshold", "max_servers", "data", "expansions", "candidates", "probes_all", "probes_pre_expansion"});
  std::uint64_t digest = 0;
  for (const auto& p : points) {
    csv.cell(p.threshold).cell(p.max_servers).cell(p.data).cell(p.expansions);
    csv.cell(p.mean_candidates).cell(p.mean_probes_all).cell(p.mean_probes_pre);
    csv.end_row();
    digest = detail::fold(digest, p.digest);
  }
  r.csv = csv.str();
  r.digest = digest;

  bool ordered = !points.empty();
  for (const auto& p : points)
    ordered = ordered && p.data > 0 && p.mean_probes_all >= 1.0 && p.mean_probes_all <= p.mean_candidates;
  r.check("probes_within_candidates", "1 <= probes <= candidates at every point", ordered ? 1.0 : 0.0, ordered);

  const double tol = c.scale <= 1.0 ? 0.15 : 0.3;
  for (const auto& p : points) {
    if (p.threshold != 0.5 || p.max_servers != 256) continue;
    r.check("probes_all_data", "1.98 +/- " + fmt_num(tol), p.mean_probes_all, within(p.mean_probes_all, 1.98 - tol, 1.98 + tol));
    r.check("read_candidates", "< 11", p.mean_candidates, p.mean_candidates < 11.0);
    r.check("probes_pre_expansion_data", "< 3", p.mean_probes_pre, p.mean_probes_pre < 3.0);
  }
  return r;
}

}  // namespace seqcheck::experiments
