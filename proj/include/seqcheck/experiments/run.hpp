#pragma once

#include <string>

#include "seqcheck/experiments/baseline.hpp"
#include "seqcheck/experiments/config.hpp"
#include "seqcheck/experiments/error256.hpp"
#include "seqcheck/experiments/props.hpp"
#include "seqcheck/experiments/readers_sweep.hpp"
#include "seqcheck/experiments/report.hpp"
#include "seqcheck/experiments/table1.hpp"
#include "seqcheck/experiments/table2.hpp"
#include "seqcheck/experiments/table3.hpp"

namespace seqcheck::experiments {

inline RunReport run_experiment(const ScenarioConfig& c) {
  const std::string& e = c.experiment;
  if (e == "table1") return run_table1(c);
  if (e == "table2") return run_table2(c);
  if (e == "table3") return run_table3(c);
  if (e == "error256") return run_error256(c);
  if (e == "readers-sweep") return run_readers_sweep(c);
  if (e == "baseline-compare") return run_baseline_compare(c);
  if (e == "props") return run_props(c);
  throw ContractError("unknown experiment '" + e + "'");
}

/// Machine-readable record of one run: resolved config, checks, digest.
inline nlohmann::ordered_json summary_json(const ScenarioConfig& c, const RunReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["config"] = to_json(c);
  j["passed"] = r.passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& k : r.checks)
    j["checks"].push_back({{"name", k.name}, {"target", k.target}, {"measured", k.measured}, {"passed", k.passed}});
  if (r.digest) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(*r.digest));
    j["digest"] = buf;
  } else {
    j["digest"] = nullptr;
  }
  j["details"] = r.details;
  return j;
}

}  // namespace seqcheck::experiments
