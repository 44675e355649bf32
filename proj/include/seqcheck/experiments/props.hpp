#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "seqcheck/deletion.hpp"
#include "seqcheck/experiments/config.hpp"
#include "seqcheck/experiments/report.hpp"
#include "seqcheck/limited.hpp"
#include "seqcheck/placement.hpp"
#include "seqcheck/prng.hpp"
#include "seqcheck/sim_cluster.hpp"

namespace seqcheck::experiments {

struct ScheduleResult {
  std::uint64_t writes = 0;
  std::uint64_t reads = 0;
  std::uint64_t stale_reads = 0;
  std::uint64_t missing_reads = 0;
  std::uint64_t cover_checks = 0;
  std::uint64_t cover_violations = 0;
  std::uint64_t epochs = 0;
};

/// One random epoch schedule: servers appear, grow and shrink between
/// batches of writes that reuse ids. Afterwards every id is read back
/// against a shadow map, and the writer each historical epoch would pick is
/// checked against the final read candidates.
inline ScheduleResult run_schedule(std::uint64_t seed, std::uint32_t schedule, std::uint64_t ids) {
  SplitMix64 rng(mix64(seed, 2000 + schedule));
  const std::uint64_t base = workload_base(seed, 32) + static_cast<std::uint64_t>(schedule) * ids;
  SimCluster cluster(OverflowPolicy::reject);
  std::unordered_map<std::uint64_t, std::uint64_t> shadow;
  ScheduleResult out;

  const std::uint64_t first = 1 + rng.below(3);
  for (std::uint64_t i = 0; i < first; ++i) cluster.add_server(rng.below(4 * ids));
  const std::uint64_t epochs = 2 + rng.below(14);
  const std::uint64_t per_epoch = std::max<std::uint64_t>(1, 2 * ids / epochs);
  for (std::uint64_t e = 0; e < epochs; ++e) {
    if (e > 0) {
      const ServerNumber pick(static_cast<std::uint32_t>(rng.below(cluster.server_count())));
      switch (rng.below(4)) {
        case 0:
          cluster.add_server(rng.below(4 * ids));
          break;
        case 1:
          cluster.set_capacity(pick, cluster.capacity(pick) + 1 + rng.below(2 * ids));
          break;
        case 2: {
          const auto& s = cluster.server(pick);
          cluster.set_capacity(pick, s.used + rng.below(s.capacity > s.used ? s.capacity - s.used + 1 : 1));
          break;
        }
        default:
          break;
      }
    }
    cluster.reconfigure();
    for (std::uint64_t w = 0; w < per_epoch; ++w) {
      const std::uint64_t id = base + rng.below(ids);
      const auto res = cluster.write(DataId(id), 1 + rng.below(3));
      ++out.writes;
      if (res.status == WriteStatus::stored) shadow[id] = res.version;
    }
  }
  out.epochs = cluster.epochs().size();

  const ParamTable& now = cluster.params();
  for (std::uint64_t i = 0; i < ids; ++i) {
    const DataId id(base + i);
    const auto it = shadow.find(id.value);
    const auto hit = cluster.read(id);
    ++out.reads;
    if (it == shadow.end()) {
      if (hit.location) ++out.stale_reads;
    } else if (!hit.location) {
      ++out.missing_reads;
    } else if (hit.location->version != it->second) {
      ++out.stale_reads;
    }
    for (const auto& epoch : cluster.epochs()) {
      ++out.cover_checks;
      const ServerNumber w = find_writer(epoch.params, id);
      if (!is_read_candidate(now, w, id)) ++out.cover_violations;
    }
  }
  return out;
}

struct LimitedResult {
  std::uint64_t sequences = 0;
  std::uint64_t decisions = 0;
  std::uint64_t invalidations = 0;
  std::uint64_t prefix_changes = 0;
  std::uint64_t mismatches = 0;
};

/// Random legal Limited sequences (append, grow-last), each step compared
/// with the full algorithm fed the same configured volumes.
inline LimitedResult run_limited_sequence(std::uint64_t seed, std::uint32_t sequence, std::uint32_t probes) {
  SplitMix64 rng(mix64(seed, 3000 + sequence));
  const std::uint64_t base = workload_base(seed, 33) + static_cast<std::uint64_t>(sequence) * probes;
  LimitedParamTable lim;
  ParamTable full;
  LimitedResult out;
  out.sequences = 1;
  const std::uint64_t steps = 1 + rng.below(24);
  for (std::uint64_t k = 0; k < steps; ++k) {
    ConfigChange change = AppendServer{rng.below(1000)};
    if (!lim.empty() && rng.below(3) == 0) change = GrowLast{1 + rng.below(1000)};
    const LimitedParamTable next = limited_reconfigure(lim, change);
    for (std::size_t i = 0; i + 1 < next.size() && i < lim.size(); ++i)
      if (next.p()[i] != lim.p()[i]) ++out.prefix_changes;
    lim = next;
    full = reconfigure(full, lim.volumes());
    for (std::size_t i = 0; i < full.size(); ++i) {
      const ServerNumber s(static_cast<std::uint32_t>(i));
      if (full.write_p(s) != lim.p(s) || full.read_p(s) != lim.p(s)) ++out.mismatches;
    }
    for (std::uint32_t j = 0; j < probes; ++j) {
      const DataId id(base + j);
      const auto d = select_writer(full, id);
      ++out.decisions;
      out.invalidations += d.invalidate.size();
      if (d.writer != limited_writer(lim, id)) ++out.mismatches;
    }
  }
  return out;
}

struct DeletionCase {
  std::uint32_t servers = 0;
  std::uint32_t victim = 0;
  std::uint64_t probes = 0;
  std::uint64_t victim_writer = 0;
  std::uint64_t victim_candidate = 0;
  std::uint64_t checked = 0;
  std::uint64_t unreadable = 0;
  std::uint64_t moved = 0;
};

/// Builds a cluster through a few epochs of rewrites, deletes `victim`,
/// then probes fresh ids and re-reads every pre-deletion id.
inline DeletionCase run_deletion_case(std::uint64_t seed, std::uint32_t index, std::uint32_t servers,
                                      std::uint32_t victim, std::uint64_t probes) {
  SplitMix64 rng(mix64(seed, 4000 + index));
  const std::uint64_t base = workload_base(seed, 34 + index);
  constexpr std::uint64_t kIds = 5000;
  SimCluster cluster(OverflowPolicy::reject);
  std::unordered_map<std::uint64_t, std::uint64_t> shadow;
  for (std::uint32_t s = 0; s < servers; ++s) {
    cluster.add_server(10 * kIds + rng.below(10 * kIds));
    cluster.reconfigure();
    for (std::uint64_t w = 0; w < kIds; ++w) {
      const std::uint64_t id = base + rng.below(kIds);
      const auto res = cluster.write(DataId(id), 1);
      if (res.status == WriteStatus::stored) shadow[id] = res.version;
    }
  }
  const auto result = delete_server(cluster, ServerNumber(victim));

  DeletionCase out{servers, victim, probes, 0, 0, 0, 0, result.moved.size()};
  const ServerNumber v(victim);
  const std::uint64_t fresh = base + (1ULL << 31);
  for (std::uint64_t i = 0; i < probes; ++i) {
    const DataId id(fresh + i);
    if (select_writer(cluster.params(), id).writer == v) ++out.victim_writer;
    if (is_read_candidate(cluster.params(), v, id)) ++out.victim_candidate;
  }
  for (const auto& [id, version] : shadow) {
    ++out.checked;
    const auto hit = cluster.read(DataId(id));
    if (!hit.location || hit.location->version != version || hit.location->server == v) ++out.unreadable;
  }
  return out;
}

struct PrngResult {
  std::uint64_t draws = 0;
  std::uint64_t out_of_range = 0;
  std::uint64_t nondeterministic = 0;
  double chi_square = 0.0;
  double p_value = 0.0;
  double max_pair_correlation = 0.0;
};

/// Range, repeatability, 256-bin chi-square over `draws` values, and the
/// largest Pearson correlation between adjacent servers' draws.
inline PrngResult run_prng_checks(std::uint64_t seed, std::uint64_t draws) {
  constexpr std::size_t kBins = 256;
  PrngResult out;
  out.draws = draws;
  std::vector<std::uint64_t> bins(kBins, 0);
  const std::uint64_t base = workload_base(seed, 40);
  const MixRand draw;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const ServerNumber s(static_cast<std::uint32_t>(i % 256));
    const DataId id(base + i / 256);
    const double r = draw(s, id);
    if (!(r >= 0.0 && r < 1.0)) {
      ++out.out_of_range;
      continue;
    }
    if (draw(s, id) != r) ++out.nondeterministic;
    ++bins[static_cast<std::size_t>(r * kBins)];
  }
  const double expected = static_cast<double>(draws) / kBins;
  for (auto b : bins) out.chi_square += (b - expected) * (b - expected) / expected;
  const boost::math::chi_squared dist(kBins - 1);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.chi_square));

  constexpr std::uint64_t kIds = 10'000;
  std::vector<std::vector<double>> cols(256, std::vector<double>(kIds));
  for (std::uint32_t s = 0; s < 256; ++s)
    for (std::uint64_t i = 0; i < kIds; ++i) cols[s][i] = draw(ServerNumber(s), DataId(base + i));
  for (std::uint32_t s = 0; s + 1 < 256; ++s) {
    const auto& a = cols[s];
    const auto& b = cols[s + 1];
    double ma = 0, mb = 0;
    for (std::uint64_t i = 0; i < kIds; ++i) ma += a[i], mb += b[i];
    ma /= kIds;
    mb /= kIds;
    double sab = 0, saa = 0, sbb = 0;
    for (std::uint64_t i = 0; i < kIds; ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    out.max_pair_correlation = std::max(out.max_pair_correlation, std::abs(sab / std::sqrt(saa * sbb)));
  }
  return out;
}

inline RunReport run_props(const ScenarioConfig& c) {
  c.validate();
  RunReport r;
  r.experiment = "props";
  CsvWriter csv({"property", "cases", "checks", "violations"});

  const auto schedules = parallel_indexed<ScheduleResult>(
      c.schedules, [&](std::size_t i) { return run_schedule(c.seed, static_cast<std::uint32_t>(i), c.ids); });
  ScheduleResult total;
  for (const auto& s : schedules) {
    total.writes += s.writes;
    total.reads += s.reads;
    total.stale_reads += s.stale_reads;
    total.missing_reads += s.missing_reads;
    total.cover_checks += s.cover_checks;
    total.cover_violations += s.cover_violations;
    total.epochs += s.epochs;
  }
  csv.cell("newest_datum").cell(std::uint64_t{c.schedules}).cell(total.reads);
  csv.cell(total.stale_reads + total.missing_reads).end_row();
  csv.cell("reader_covers_writer").cell(std::uint64_t{c.schedules}).cell(total.cover_checks);
  csv.cell(total.cover_violations).end_row();

  const auto limited = parallel_indexed<LimitedResult>(
      c.schedules, [&](std::size_t i) { return run_limited_sequence(c.seed, static_cast<std::uint32_t>(i), 200); });
  LimitedResult lim;
  for (const auto& l : limited) {
    lim.sequences += l.sequences;
    lim.decisions += l.decisions;
    lim.invalidations += l.invalidations;
    lim.prefix_changes += l.prefix_changes;
    lim.mismatches += l.mismatches;
  }
  csv.cell("limited_no_invalidation").cell(lim.sequences).cell(lim.decisions).cell(lim.invalidations).end_row();
  csv.cell("limited_frozen_prefix").cell(lim.sequences).cell(lim.decisions).cell(lim.prefix_changes).end_row();
  csv.cell("limited_matches_full").cell(lim.sequences).cell(lim.decisions).cell(lim.mismatches).end_row();

  struct Shape {
    std::uint32_t servers, victim;
  };
  const std::vector<Shape> shapes{{2, 0}, {2, 1}, {4, 0}, {4, 2}, {6, 5}, {8, 3}, {8, 0}, {12, 7}};
  constexpr std::uint64_t kProbes = 100'000;
  const auto deletions = parallel_indexed<DeletionCase>(shapes.size(), [&](std::size_t i) {
    return run_deletion_case(c.seed, static_cast<std::uint32_t>(i), shapes[i].servers, shapes[i].victim, kProbes);
  });
  std::uint64_t del_probes = 0, del_hits = 0, del_checked = 0, del_unreadable = 0;
  for (const auto& d : deletions) {
    del_probes += d.probes;
    del_hits += d.victim_writer + d.victim_candidate;
    del_checked += d.checked;
    del_unreadable += d.unreadable;
  }
  csv.cell("deletion_victim_unused").cell(std::uint64_t{shapes.size()}).cell(del_probes).cell(del_hits).end_row();
  csv.cell("deletion_data_readable").cell(std::uint64_t{shapes.size()}).cell(del_checked).cell(del_unreadable).end_row();

  const auto prng = run_prng_checks(c.seed, 1'000'000);
  csv.cell("prng_range").cell(std::uint64_t{1}).cell(prng.draws).cell(prng.out_of_range).end_row();
  csv.cell("prng_determinism").cell(std::uint64_t{1}).cell(prng.draws).cell(prng.nondeterministic).end_row();
  r.csv = csv.str();
  std::uint64_t digest = 0;
  for (const auto& s : schedules) digest = detail::fold(detail::fold(digest, s.writes), s.epochs);
  for (const auto& d : deletions) digest = detail::fold(digest, d.moved);
  r.digest = digest;

  r.check("newest_datum", "0 stale reads", double(total.stale_reads + total.missing_reads),
          total.stale_reads + total.missing_reads == 0);
  r.check("reader_covers_writer", "0 violations", double(total.cover_violations), total.cover_violations == 0);
  r.check("limited_no_invalidation", "0 invalidations", double(lim.invalidations), lim.invalidations == 0);
  r.check("limited_frozen_prefix", "0 prefix changes", double(lim.prefix_changes), lim.prefix_changes == 0);
  r.check("limited_matches_full", "0 mismatches", double(lim.mismatches), lim.mismatches == 0);
  r.check("deletion_victim_unused", "0 decisions naming the victim", double(del_hits), del_hits == 0);
  r.check("deletion_data_readable", "0 unreadable", double(del_unreadable), del_unreadable == 0);
  r.check("prng_range", "all draws in [0, 1)", double(prng.out_of_range), prng.out_of_range == 0);
  r.check("prng_determinism", "repeat draws identical", double(prng.nondeterministic), prng.nondeterministic == 0);
  r.check("prng_chi_square", "p > 0.001", prng.p_value, prng.p_value > 0.001);
  r.check("prng_pair_correlation", "max |r| < 0.05", prng.max_pair_correlation, prng.max_pair_correlation < 0.05);
  r.details["writes"] = total.writes;
  r.details["epochs"] = total.epochs;
  r.details["moved_on_deletion"] = [&] {
    std::uint64_t m = 0;
    for (const auto& d : deletions) m += d.moved;
    return m;
  }();
  r.details["chi_square"] = prng.chi_square;
  return r;
}

}  // namespace seqcheck::experiments
