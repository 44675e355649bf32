#pragma once

#include <cstdint>
#include <vector>

#include "seqcheck/experiments/config.hpp"
#include "seqcheck/experiments/report.hpp"
#include "seqcheck/hash_ring.hpp"
#include "seqcheck/metrics.hpp"
#include "seqcheck/sim_cluster.hpp"

namespace seqcheck::experiments {

struct CommandCounts {
  std::uint64_t data = 0;
  std::uint64_t write_commands = 0;
  std::uint64_t invalidate_commands = 0;
  std::uint64_t read_commands = 0;
  double imbalance = 0.0;
  std::uint64_t digest = 0;
};

/// Sequential Checking under the growth schedule: start with one server,
/// write a phase, add a server, and so on up to `servers`; then one more
/// phase plus the tail. With the default volume (two phases per server) a
/// server is added whenever the cluster is half full.
inline CommandCounts run_seqcheck_workload(const ScenarioConfig& c, std::uint64_t phase, std::uint64_t tail) {
  StreamCluster cluster(workload_base(c.seed, 5), OverflowPolicy::allow);
  const Bytes capacity = c.scaled(c.server_volume);
  cluster.reserve(phase * c.servers + tail);
  cluster.add_server(capacity);
  cluster.reconfigure();
  CommandCounts out;
  auto write_n = [&](std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) out.invalidate_commands += cluster.append(c.datum_size).invalidate_commands;
  };
  for (std::uint32_t k = 1; k < c.servers; ++k) {
    write_n(phase);
    cluster.add_server(capacity);
    cluster.reconfigure();
  }
  write_n(phase + tail);
  out.data = cluster.written();
  out.write_commands = out.data + out.invalidate_commands;
  for (std::uint64_t i = 0; i < out.data; ++i) out.read_commands += cluster.probes_until_hit(i);
  std::vector<std::uint64_t> loads;
  for (std::uint32_t s = 0; s < c.servers; ++s) loads.push_back(cluster.stored_count(ServerNumber(s)));
  out.imbalance = imbalance(loads);
  out.digest = cluster.digest();
  return out;
}

/// Consistent hashing over all servers from the start; one command per
/// access.
inline CommandCounts run_ring_workload(const ScenarioConfig& c, std::uint64_t total) {
  HashRing ring(c.vnodes);
  for (std::uint32_t s = 0; s < c.servers; ++s) ring = ring_add(ring, ServerNumber(s));
  std::vector<std::uint64_t> loads(c.servers, 0);
  const std::uint64_t base = workload_base(c.seed, 5);
  for (std::uint64_t i = 0; i < total; ++i) ++loads[ring_locate(ring, DataId(base + i)).index()];
  CommandCounts out;
  out.data = total;
  out.write_commands = total;
  out.read_commands = total;
  out.imbalance = imbalance(loads);
  return out;
}

inline RunReport run_baseline_compare(const ScenarioConfig& c) {
  c.validate();
  const std::uint64_t phase = c.scaled_count(c.writes_per_round);
  const std::uint64_t tail = c.scaled_count(c.tail_writes);
  const auto sc = run_seqcheck_workload(c, phase, tail);
  const auto ch = run_ring_workload(c, sc.data);

  RunReport r;
  r.experiment = "baseline-compare";
  CsvWriter csv({"algorithm", "data", "write_commands", "invalidate_commands", "read_commands", "read_ratio", "imbalance"});
  const auto row = [&](const char* name, const CommandCounts& k) {
    csv.cell(name).cell(k.data).cell(k.write_commands).cell(k.invalidate_commands).cell(k.read_commands);
    csv.cell(k.data ? static_cast<double>(k.read_commands) / k.data : 0.0).cell(k.imbalance);
    csv.end_row();
  };
  row("sequential-checking", sc);
  row("consistent-hashing", ch);
  r.csv = csv.str();
  r.digest = sc.digest;

  const double sc_ratio = static_cast<double>(sc.read_commands) / sc.data;
  const double ch_ratio = static_cast<double>(ch.read_commands) / ch.data;
  r.check("seqcheck_read_ratio", "1.425 +/- 0.05", sc_ratio, within(sc_ratio, 1.375, 1.475));
  r.check("ring_read_ratio", "== 1", ch_ratio, ch.read_commands == ch.data);
  r.check("seqcheck_imbalance", "< 1%", sc.imbalance, sc.imbalance < 0.01);
  r.check("ring_imbalance", "> 10%", ch.imbalance, ch.imbalance > 0.10);
  r.details["seqcheck_invalidate_commands"] = sc.invalidate_commands;
  return r;
}

}  // namespace seqcheck::experiments
