#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "seqcheck/experiments/config.hpp"
#include "seqcheck/experiments/report.hpp"
#include "seqcheck/sim_cluster.hpp"

namespace seqcheck::experiments {

inline double round_to(double v, int places) {
  const double f = std::pow(10.0, places);
  return std::round(v * f) / f;
}

/// Equal-volume proportionality: `servers` servers of `server_volume` each,
/// unique ids, as many datums as the cluster holds. Parameters are set once;
/// writes that land on a full server are still counted.
inline RunReport run_table1(const ScenarioConfig& c) {
  c.validate();
  const Bytes volume = c.scaled(c.server_volume);
  if (volume < c.datum_size) throw ContractError("table1: server volume smaller than one datum");

  StreamCluster cluster(workload_base(c.seed, 0), OverflowPolicy::allow);
  for (std::uint32_t i = 0; i < c.servers; ++i) cluster.add_server(volume);
  cluster.reconfigure();
  const std::uint64_t writes = cluster.capacity_total() / c.datum_size;
  cluster.reserve(writes);
  for (std::uint64_t i = 0; i < writes; ++i) cluster.append(c.datum_size);

  RunReport r;
  r.experiment = "table1";
  CsvWriter csv({"server", "write_p", "written", "data_volume_tb", "deviation"});
  const double share = static_cast<double>(writes) / c.servers;
  const double tol = c.scale <= 1.0 ? 0.01 : 0.04;
  double worst = 0.0;
  bool write_p_exact = true;
  for (std::uint32_t i = 0; i < c.servers; ++i) {
    const ServerNumber s(i);
    const auto n = cluster.stored_count(s);
    const double dev = (static_cast<double>(n) - share) / share;
    worst = std::max(worst, std::fabs(dev));
    const double wp = cluster.params().write_p(s);
    write_p_exact = write_p_exact && round_to(wp, 3) == round_to(1.0 / (i + 1), 3);
    csv.cell(i).cell(wp).cell(n).cell(static_cast<double>(n) * c.datum_size / kTB).cell(dev);
    csv.end_row();
  }
  r.csv = csv.str();
  r.digest = cluster.digest();
  r.details["writes"] = writes;
  r.check("write_p_rounded", "1/(Y+1) to 3 places", write_p_exact ? 1.0 : 0.0, write_p_exact);
  r.check("max_share_deviation", "<= " + pct(tol), worst, worst <= tol);
  return r;
}

}  // namespace seqcheck::experiments
