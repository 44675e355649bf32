// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed here.
//
//   acceptance                 scaled defaults (minutes at most)
//   acceptance --paper-scale   full-size Table I, error study and sweep

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "seqcheck/experiments/run.hpp"
#include "seqcheck/placement.hpp"

using namespace seqcheck;
using namespace seqcheck::experiments;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string describe(const RunReport& r) {
  std::ostringstream os;
  bool first = true;
  for (const auto& k : r.checks) {
    os << (first ? "" : "; ") << k.name << " target " << k.target << " measured " << fmt_num(k.measured)
       << (k.passed ? "" : " [miss]");
    first = false;
  }
  return os.str();
}

Outcome from_report(const RunReport& r) { return {r.passed(), describe(r)}; }

Outcome ac1_table1(bool paper) {
  auto c = defaults_for("table1");
  c.scale = paper ? 1.0 : 100.0;
  const auto r = run_table1(c);
  for (const auto& k : r.checks)
    if (k.name == "max_share_deviation") return {k.passed, k.name + " target " + k.target + " measured " + pct(k.measured)};
  return {false, "max_share_deviation check missing"};
}

Outcome ac2_write_p() {
  const std::vector<FreeVolume> volumes(6, 100 * kTB);
  const auto p = compute_write_p(volumes);
  const double want[] = {1.000, 0.500, 0.333, 0.250, 0.200, 0.167};
  std::ostringstream os;
  bool ok = p.size() == 6;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double rounded = std::round(p[i] * 1000.0) / 1000.0;
    ok = ok && rounded == want[i];
    os << (i ? " " : "") << fmt_num(rounded);
  }
  return {ok, "rounded write_p [" + os.str() + "] vs [1 0.5 0.333 0.25 0.2 0.167]"};
}

Outcome ac3_fig1() {
  const auto t = ParamTable::from_vectors({1.00, 0.50, 0.33, 0.25, 0.20, 0.17, 0.14},
                                          {1.00, 0.67, 0.40, 0.32, 0.37, 0.17, 0.20});
  const TableRand draw({0.81, 0.73, 0.24, 0.37, 0.55, 0.12, 0.18});
  const auto d = select_writer(t, DataId(0), draw);
  const auto c = select_read_candidates(t, DataId(0), draw);
  std::ostringstream os;
  os << "writer " << d.writer << ", invalidate {";
  for (std::size_t i = 0; i < d.invalidate.size(); ++i) os << (i ? "," : "") << d.invalidate[i];
  os << "}, candidates [";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << "]";
  const bool ok = d.writer == ServerNumber(5) && d.invalidate == std::vector<ServerNumber>{ServerNumber(6)} &&
                  c == std::vector<ServerNumber>{ServerNumber(6), ServerNumber(5), ServerNumber(2), ServerNumber(0)};
  return {ok, os.str() + " vs writer 5, invalidate {6}, candidates [6,5,2,0]"};
}

Outcome ac4_error256(bool paper) {
  auto c = defaults_for("error256");
  c.multipliers = paper ? std::vector<double>{1e6} : std::vector<double>{1e2, 1e3, 1e4};
  return from_report(run_error256(c));
}

Outcome ac5_readers(bool paper) {
  auto c = defaults_for("readers-sweep");
  c.scale = paper ? 1.0 : 100.0;
  c.thresholds = {0.5};
  c.max_servers = {256};
  return from_report(run_readers_sweep(c));
}

Outcome ac6_baseline() { return from_report(run_baseline_compare(defaults_for("baseline-compare"))); }

Outcome ac7_props() { return from_report(run_props(defaults_for("props"))); }

Outcome ac8_determinism() {
  std::vector<ScenarioConfig> configs{defaults_for("table1"), defaults_for("table2"), defaults_for("table3"),
                                      defaults_for("baseline-compare")};
  configs[0].scale = 100;
  auto sweep = defaults_for("readers-sweep");
  sweep.thresholds = {0.5};
  sweep.max_servers = {16};
  configs.push_back(sweep);
  std::ostringstream os;
  bool ok = true;
  for (const auto& c : configs) {
    const auto a = run_experiment(c);
    const auto b = run_experiment(c);
    const bool same = a.csv == b.csv && a.digest && a.digest == b.digest;
    ok = ok && same;
    os << (os.tellp() ? ", " : "") << c.experiment << (same ? " identical" : " DIFFERS");
  }
  return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const bool paper = argc > 1 && std::strcmp(argv[1], "--paper-scale") == 0;
  std::cout << "mode: " << (paper ? "paper scale" : "scaled defaults") << "\n";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 table1 proportionality", [&] { return ac1_table1(paper); }},
      {"AC2 write_p formula", ac2_write_p},
      {"AC3 figure-1 trace", ac3_fig1},
      {"AC4 256-server error study", [&] { return ac4_error256(paper); }},
      {"AC5 read amplification", [&] { return ac5_readers(paper); }},
      {"AC6 baseline comparison", ac6_baseline},
      {"AC7 property suite", ac7_props},
      {"AC8 determinism", ac8_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.passed ? "PASS " : "FAIL ") << name << " -- " << o.detail << std::endl;
    failed += !o.passed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return failed ? 1 : 0;
}
