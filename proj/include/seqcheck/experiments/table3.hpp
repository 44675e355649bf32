#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <optional>
#include <vector>

#include "seqcheck/experiments/config.hpp"
#include "seqcheck/experiments/report.hpp"
#include "seqcheck/sim_cluster.hpp"

namespace seqcheck::experiments {

/// Rewrites under changing volumes. Sequence n (1-based) runs with n
/// servers: every server gets a fresh free volume from [0, 1), parameters
/// are recomputed, then `writes_per_round` ids are written. Ids continue
/// across sequences and restart at 0 when the server count reaches
/// `reset_at`, so ids written early are rewritten later under a different
/// table. Afterwards every id is read back and must return its last write.
inline RunReport run_table3(const ScenarioConfig& c) {
  c.validate();
  constexpr double kUnit = 1e6;
  const std::uint64_t per_seq = c.scaled_count(c.writes_per_round);
  const std::uint64_t id_base = workload_base(c.seed, 3);
  const auto first_offset = [&](std::uint64_t n) { return (n >= c.reset_at ? n - c.reset_at : n - 1) * per_seq; };
  std::uint64_t id_range = 0;
  for (std::uint32_t n = 1; n <= c.rounds; ++n) id_range = std::max(id_range, first_offset(n) + per_seq);
  const std::uint64_t trace = id_range ? c.trace_id % id_range : 0;
  const DataId trace_id(id_base + trace);

  SplitMix64 rng(mix64(c.seed, 3));
  SimCluster cluster(OverflowPolicy::allow);
  struct Shadow {
    std::uint32_t version = 0;
    std::uint32_t server = 0;
  };
  std::vector<Shadow> shadow(id_range);
  std::vector<std::vector<double>> trace_write_p;
  std::vector<std::uint32_t> trace_writer;

  for (std::uint32_t n = 1; n <= c.rounds; ++n) {
    cluster.add_server(0);
    for (const auto& s : cluster.servers())
      cluster.set_capacity(s.number, s.used + static_cast<Bytes>(rng.uniform() * kUnit));
    cluster.reconfigure();
    const std::uint64_t start = first_offset(n);
    for (std::uint64_t i = 0; i < per_seq; ++i) {
      const std::uint64_t off = start + i;
      const DataId id(id_base + off);
      const auto w = cluster.write(id, 1);
      shadow[off] = {shadow[off].version + 1, w.writer.value};
      if (id == trace_id) {
        const auto wp = cluster.params().write_p();
        trace_write_p.emplace_back(wp.begin(), wp.end());
        trace_writer.push_back(w.writer.value);
      }
    }
  }

  std::uint64_t checked = 0, newest = 0;
  for (std::uint64_t off = 0; off < shadow.size(); ++off) {
    if (shadow[off].version == 0) continue;
    ++checked;
    const auto got = cluster.read(DataId(id_base + off));
    if (got.location && got.location->version == shadow[off].version && got.location->server.value == shadow[off].server)
      ++newest;
  }

  RunReport r;
  r.experiment = "table3";
  CsvWriter csv({"server", "first_write_p", "second_write_p", "read_p", "write_p_at_read", "rand", "role"});
  if (c.rounds > 0) {
    const auto& params = cluster.params();
    const auto candidates = select_read_candidates(params, trace_id);
    bool consistent = true;
    for (std::size_t s = 0; s < params.size(); ++s) {
      const ServerNumber sn(static_cast<std::uint32_t>(s));
      csv.cell(static_cast<std::uint64_t>(s));
      for (std::size_t k = 0; k < 2; ++k) {
        if (k < trace_write_p.size() && s < trace_write_p[k].size()) {
          csv.cell(trace_write_p[k][s]);
          consistent = consistent && params.read_p(sn) >= trace_write_p[k][s];
        } else {
          csv.cell("");
        }
      }
      csv.cell(params.read_p(sn)).cell(params.write_p(sn)).cell(MixRand{}(sn, trace_id));
      std::string role;
      for (std::size_t k = 0; k < trace_writer.size(); ++k)
        if (trace_writer[k] == s) role += (role.empty() ? "" : "+") + std::string(k == 0 ? "first_writer" : "second_writer");
      if (std::find(candidates.begin(), candidates.end(), sn) != candidates.end())
        role += (role.empty() ? "" : "+") + std::string("read_candidate");
      csv.cell(role);
      csv.end_row();
    }
    const double frac = checked ? static_cast<double>(newest) / checked : 1.0;
    r.check("newest_version_read", "100%", frac, newest == checked);
    r.check("trace_read_p_covers_write_p", "read_p >= every listed write_p", consistent ? 1.0 : 0.0, consistent);
  }
  r.csv = csv.str();
  r.digest = cluster.digest();
  r.details["trace_id"] = trace_id.value;
  r.details["ids_checked"] = checked;
  r.details["ids_newest"] = newest;
  return r;
}

}  // namespace seqcheck::experiments
