#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqcheck/types.hpp"

namespace seqcheck::experiments {

/// Everything that drives one experiment run. Fields not used by a given
/// experiment are ignored by it. `scale` divides volumes and data counts
/// together.
struct ScenarioConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::uint32_t trials = 1;
  std::string out;

  // table1 / baseline-compare: fixed server count. table2: server cap.
  std::uint32_t servers = 6;
  std::uint32_t initial_servers = 1;
  Bytes server_volume = 100 * kTB;

  // readers-sweep growth rule
  Bytes initial_volume = 100 * kTB;
  Bytes increment = 100 * kTB;
  Bytes max_volume = 1 * kPB;
  std::vector<double> thresholds;
  std::vector<std::uint32_t> max_servers;

  Bytes datum_size = 1 * kGB;

  // error256: data count = total free volume x multiplier. table2 uses the
  // first entry as its write multiplier.
  std::vector<double> multipliers;
  double volume_lo = 0.5;
  double volume_hi = 1.5;

  // table2 rounds / table3 write sequences
  std::uint32_t rounds = 10;
  std::uint32_t rounds_per_add = 2;
  std::uint32_t reset_at = 4;
  std::uint64_t writes_per_round = 1'000'000;
  std::uint64_t tail_writes = 4'000'000;
  std::uint64_t trace_id = 1'234'567;

  std::uint32_t vnodes = 100;

  // props
  std::uint32_t schedules = 1000;
  std::uint32_t ids = 10'000;

  void validate() const {
    if (!(scale >= 1.0) || !std::isfinite(scale)) throw ContractError("scale must be >= 1");
    if (trials == 0 || servers == 0 || initial_servers == 0 || vnodes == 0)
      throw ContractError("counts must be positive");
    if (datum_size == 0) throw ContractError("datum size must be positive");
    if (server_volume == 0 || initial_volume == 0 || increment == 0 || max_volume < initial_volume)
      throw ContractError("invalid volume parameters");
    for (double n : thresholds)
      if (!(n >= 0.0 && n <= 1.0)) throw ContractError("threshold outside [0, 1]");
    for (auto m : max_servers)
      if (m == 0) throw ContractError("max servers must be positive");
    for (double m : multipliers)
      if (!(m > 0.0)) throw ContractError("multiplier must be positive");
    if (!(volume_lo >= 0.0 && volume_hi > volume_lo)) throw ContractError("invalid volume range");
    if (rounds_per_add == 0 || reset_at == 0) throw ContractError("round counts must be positive");
    if (seed >= (1ULL << 24)) throw ContractError("seed must be below 2^24");
  }

  /// Volume divided by the scale, rounded to whole bytes.
  Bytes scaled(Bytes v) const { return static_cast<Bytes>(std::llround(static_cast<long double>(v) / scale)); }
  std::uint64_t scaled_count(std::uint64_t n) const {
    return static_cast<std::uint64_t>(std::llround(static_cast<long double>(n) / scale));
  }
};

/// Defaults reproducing each experiment's reference setup.
inline ScenarioConfig defaults_for(const std::string& experiment) {
  ScenarioConfig c;
  c.experiment = experiment;
  if (experiment == "table1") {
    c.servers = 6;
    c.server_volume = 100 * kTB;
  } else if (experiment == "table2") {
    c.servers = 6;
    c.initial_servers = 2;
    c.rounds = 10;
    c.rounds_per_add = 2;
    c.multipliers = {100'000};
  } else if (experiment == "table3") {
    c.servers = 6;
    c.rounds = 6;
    c.reset_at = 4;
    c.writes_per_round = 1'000'000;
  } else if (experiment == "error256") {
    c.servers = 256;
    c.trials = 10;
    c.multipliers = {1e6};
  } else if (experiment == "readers-sweep") {
    c.scale = 100;
    c.thresholds = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    c.max_servers = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  } else if (experiment == "baseline-compare") {
    c.servers = 8;
    c.writes_per_round = 500'000;
    c.tail_writes = 4'000'000;
    c.vnodes = 100;
    c.datum_size = 1000;
    c.server_volume = 1'000'000 * c.datum_size;
  } else if (experiment == "props") {
    c.schedules = 1000;
    c.ids = 10'000;
  } else {
    throw ContractError("unknown experiment '" + experiment + "'");
  }
  return c;
}

/// Overrides fields present in `j`; unknown keys are an error so typos do
/// not pass silently.
inline void apply_overrides(ScenarioConfig& c, const nlohmann::json& j) {
  for (const auto& [key, v] : j.items()) {
    if (key == "experiment") v.get_to(c.experiment);
    else if (key == "seed") v.get_to(c.seed);
    else if (key == "scale") v.get_to(c.scale);
    else if (key == "trials") v.get_to(c.trials);
    else if (key == "out") v.get_to(c.out);
    else if (key == "servers") v.get_to(c.servers);
    else if (key == "initial_servers") v.get_to(c.initial_servers);
    else if (key == "server_volume") v.get_to(c.server_volume);
    else if (key == "initial_volume") v.get_to(c.initial_volume);
    else if (key == "increment") v.get_to(c.increment);
    else if (key == "max_volume") v.get_to(c.max_volume);
    else if (key == "thresholds") v.get_to(c.thresholds);
    else if (key == "max_servers") v.get_to(c.max_servers);
    else if (key == "datum_size") v.get_to(c.datum_size);
    else if (key == "multipliers") v.get_to(c.multipliers);
    else if (key == "volume_lo") v.get_to(c.volume_lo);
    else if (key == "volume_hi") v.get_to(c.volume_hi);
    else if (key == "rounds") v.get_to(c.rounds);
    else if (key == "rounds_per_add") v.get_to(c.rounds_per_add);
    else if (key == "reset_at") v.get_to(c.reset_at);
    else if (key == "writes_per_round") v.get_to(c.writes_per_round);
    else if (key == "tail_writes") v.get_to(c.tail_writes);
    else if (key == "trace_id") v.get_to(c.trace_id);
    else if (key == "vnodes") v.get_to(c.vnodes);
    else if (key == "schedules") v.get_to(c.schedules);
    else if (key == "ids") v.get_to(c.ids);
    else throw ContractError("unknown config key '" + key + "'");
  }
}

inline nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  return {{"experiment", c.experiment},
          {"seed", c.seed},
          {"scale", c.scale},
          {"trials", c.trials},
          {"servers", c.servers},
          {"initial_servers", c.initial_servers},
          {"server_volume", c.server_volume},
          {"initial_volume", c.initial_volume},
          {"increment", c.increment},
          {"max_volume", c.max_volume},
          {"thresholds", c.thresholds},
          {"max_servers", c.max_servers},
          {"datum_size", c.datum_size},
          {"multipliers", c.multipliers},
          {"volume_lo", c.volume_lo},
          {"volume_hi", c.volume_hi},
          {"rounds", c.rounds},
          {"rounds_per_add", c.rounds_per_add},
          {"reset_at", c.reset_at},
          {"writes_per_round", c.writes_per_round},
          {"tail_writes", c.tail_writes},
          {"trace_id", c.trace_id},
          {"vnodes", c.vnodes},
          {"schedules", c.schedules},
          {"ids", c.ids}};
}

}  // namespace seqcheck::experiments
