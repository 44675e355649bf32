// Command-line front end for the experiment runners.
//
//   seqcheck <experiment> [--seed N] [--scale S] [--trials T] [--out FILE] [--config FILE.json]
//
// Writes the CSV to --out (stdout when absent) and a JSON summary next to it,
// then prints one "target vs measured" line per check. Exit status is 0 only
// when every check passes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqcheck/experiments/run.hpp"

namespace ex = seqcheck::experiments;

namespace {

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<double> scale;
  std::optional<std::uint32_t> trials;
  std::string out;
  std::string config;
  std::vector<double> thresholds;
  std::vector<std::uint32_t> max_servers;
  std::vector<double> multipliers;
  std::optional<std::uint64_t> trace_id;
  std::optional<std::uint32_t> vnodes;
  std::optional<std::uint32_t> schedules;
  std::optional<std::uint32_t> ids;
};

ex::ScenarioConfig resolve(const std::string& name, const Flags& f) {
  auto c = ex::defaults_for(name);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw std::runtime_error("cannot open config file " + f.config);
    ex::apply_overrides(c, nlohmann::json::parse(in));
    c.experiment = name;
  }
  if (f.seed) c.seed = *f.seed;
  if (f.scale) c.scale = *f.scale;
  if (f.trials) c.trials = *f.trials;
  if (!f.out.empty()) c.out = f.out;
  if (!f.thresholds.empty()) c.thresholds = f.thresholds;
  if (!f.max_servers.empty()) c.max_servers = f.max_servers;
  if (!f.multipliers.empty()) c.multipliers = f.multipliers;
  if (f.trace_id) c.trace_id = *f.trace_id;
  if (f.vnodes) c.vnodes = *f.vnodes;
  if (f.schedules) c.schedules = *f.schedules;
  if (f.ids) c.ids = *f.ids;
  c.validate();
  return c;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential Checking placement experiments"};
  app.require_subcommand(1);
  Flags flags;

  const std::vector<std::pair<std::string, std::string>> experiments{
      {"table1", "equal servers, written share per server"},
      {"table2", "varying free volume, written data vs summed free volume"},
      {"table3", "per-datum epoch trace and newest-version reads"},
      {"error256", "proportionality error over 256 servers"},
      {"readers-sweep", "read candidates and probes vs expansion threshold"},
      {"baseline-compare", "command counts and imbalance vs consistent hashing"},
      {"props", "randomised property suite"},
  };
  for (const auto& [name, help] : experiments) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--seed", flags.seed, "workload seed (< 2^24)");
    sub->add_option("--scale", flags.scale, "divide volumes and data counts by this factor");
    sub->add_option("--trials", flags.trials, "trials per configuration");
    sub->add_option("--out", flags.out, "CSV output path (stdout when omitted)");
    sub->add_option("--config", flags.config, "JSON file of config overrides")->check(CLI::ExistingFile);
    if (name == "readers-sweep") {
      sub->add_option("--threshold", flags.thresholds, "expansion thresholds N")->delimiter(',');
      sub->add_option("--max-servers", flags.max_servers, "maximum server counts")->delimiter(',');
    } else if (name == "error256") {
      sub->add_option("--multiplier", flags.multipliers, "data count per unit of free volume")->delimiter(',');
    } else if (name == "table3") {
      sub->add_option("--trace-id", flags.trace_id, "datum id to trace");
    } else if (name == "baseline-compare") {
      sub->add_option("--vnodes", flags.vnodes, "virtual nodes per server on the ring");
    } else if (name == "props") {
      sub->add_option("--schedules", flags.schedules, "random epoch schedules");
      sub->add_option("--ids", flags.ids, "distinct ids per schedule");
    }
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    const auto config = resolve(name, flags);
    const auto report = ex::run_experiment(config);
    std::ostream& log = config.out.empty() ? std::cerr : std::cout;
    if (config.out.empty()) {
      std::cout << report.csv;
    } else {
      write_file(config.out, report.csv);
      write_file(config.out + ".summary.json", ex::summary_json(config, report).dump(2) + "\n");
    }
    for (const auto& k : report.checks) {
      log << (k.passed ? "PASS " : "FAIL ") << k.name << ": target " << k.target << ", measured "
          << ex::fmt_num(k.measured) << "\n";
    }
    if (report.digest) {
      char buf[20];
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(*report.digest));
      log << "digest " << buf << "\n";
    }
    return report.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
