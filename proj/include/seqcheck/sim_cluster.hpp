#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqcheck/placement.hpp"
#include "seqcheck/prng.hpp"
#include "seqcheck/types.hpp"

namespace seqcheck {

struct StoredEntry {
  std::uint64_t version = 0;
  Bytes size = 0;
  bool valid = true;
};

/// A capacity-tracked server. `used` counts every byte ever written to it:
/// invalidation flips a flag and never gives space back.
struct SimServer {
  ServerNumber number;
  Bytes capacity = 0;
  Bytes used = 0;
  bool retired = false;
  std::unordered_map<DataId, StoredEntry> store;

  FreeVolume free() const { return (retired || used >= capacity) ? 0 : capacity - used; }
};

/// Whether a write may push a server past its capacity.
enum class OverflowPolicy { reject, allow };

enum class WriteStatus { stored, writer_full };

struct WriteOutcome {
  WriteStatus status = WriteStatus::stored;
  ServerNumber writer;
  std::uint64_t version = 0;
  std::size_t invalidate_commands = 0;  // servers told to invalidate
  std::size_t invalidated = 0;          // copies actually flagged
};

struct ProbeStats {
  std::uint32_t candidates_counted = 0;
  std::uint32_t probes_until_hit = 0;
  bool found = false;
};

struct Location {
  ServerNumber server;
  std::uint64_t version = 0;
};

struct ReadOutcome {
  std::optional<Location> location;
  ProbeStats stats;
};

/// Free volumes and the table they produced, one per configuration epoch.
struct EpochRecord {
  std::vector<FreeVolume> free_volumes;
  ParamTable params;
};

namespace detail {

// Running fold used by the state digests.
constexpr std::uint64_t fold(std::uint64_t h, std::uint64_t x) noexcept { return mix64(h ^ x) + kGoldenGamma; }

// Two-level digest: per server, the (id, version, valid) tuples in id order;
// then the servers in number order.
struct DigestBuilder {
  std::uint64_t h = 0x5EC0C4EC0000ULL;
  void add_server(ServerNumber s, std::uint64_t count, std::uint64_t server_hash) {
    h = fold(h, s.value);
    h = fold(h, count);
    h = fold(h, server_hash);
  }
};

constexpr std::uint64_t kServerSeed = 0x51DEC0DEULL;

constexpr std::uint64_t fold_entry(std::uint64_t h, DataId id, std::uint64_t version, bool valid) noexcept {
  h = fold(h, id.value);
  h = fold(h, version);
  return fold(h, valid ? 1 : 0);
}

}  // namespace detail

/// Deterministic in-memory cluster running the full write / invalidate /
/// read protocol against real per-server stores.
template <RandSource R = MixRand>
class BasicCluster {
 public:
  explicit BasicCluster(OverflowPolicy overflow = OverflowPolicy::reject, R draw = {})
      : overflow_(overflow), draw_(std::move(draw)) {}

  /// Adds a server with the given capacity. Takes effect at the next
  /// reconfigure().
  ServerNumber add_server(Bytes capacity) {
    const ServerNumber s(static_cast<std::uint32_t>(servers_.size()));
    servers_.push_back(SimServer{s, capacity, 0, false, {}});
    return s;
  }

  void set_capacity(ServerNumber s, Bytes capacity) { server_mut(s).capacity = capacity; }

  /// Recomputes the parameter table from the current free volumes.
  void reconfigure() {
    auto volumes = free_volumes();
    params_ = seqcheck::reconfigure(params_, volumes);
    epochs_.push_back(EpochRecord{std::move(volumes), params_});
  }

  std::size_t server_count() const { return servers_.size(); }
  const SimServer& server(ServerNumber s) const { return servers_.at(s.index()); }
  const std::vector<SimServer>& servers() const { return servers_; }
  Bytes capacity(ServerNumber s) const { return server(s).capacity; }

  Bytes capacity_total() const {
    Bytes total = 0;
    for (const auto& s : servers_)
      if (!s.retired) total += s.capacity;
    return total;
  }
  Bytes used_total() const {
    Bytes total = 0;
    for (const auto& s : servers_)
      if (!s.retired) total += s.used;
    return total;
  }

  std::vector<FreeVolume> free_volumes() const {
    std::vector<FreeVolume> out;
    out.reserve(servers_.size());
    for (const auto& s : servers_) out.push_back(s.free());
    return out;
  }

  const ParamTable& params() const { return params_; }
  const std::vector<EpochRecord>& epochs() const { return epochs_; }
  const R& draw() const { return draw_; }
  OverflowPolicy overflow() const { return overflow_; }

  std::uint64_t latest_version(DataId id) const {
    auto it = versions_.find(id);
    return it == versions_.end() ? 0 : it->second;
  }

  /// Writes the next version of `id`.
  WriteOutcome write(DataId id, Bytes size) { return write_version(id, size, latest_version(id) + 1); }

  /// Writes `id` with an explicit version through the normal placement path.
  /// Used to move an existing version elsewhere without creating a new one.
  WriteOutcome write_version(DataId id, Bytes size, std::uint64_t version) {
    if (params_.empty()) throw ContractError("write before the first reconfigure()");
    auto decision = select_writer(params_, id, draw_);
    WriteOutcome out;
    out.writer = decision.writer;
    out.version = version;
    SimServer& target = servers_[decision.writer.index()];
    if (overflow_ == OverflowPolicy::reject && target.used + size > target.capacity) {
      out.status = WriteStatus::writer_full;
      return out;
    }
    out.invalidate_commands = decision.invalidate.size();
    for (ServerNumber s : decision.invalidate) {
      auto& store = servers_[s.index()].store;
      auto it = store.find(id);
      if (it != store.end() && it->second.valid) {
        it->second.valid = false;
        ++out.invalidated;
      }
    }
    target.used += size;
    target.store[id] = StoredEntry{version, size, true};
    auto& latest = versions_[id];
    latest = std::max(latest, version);
    return out;
  }

  /// Probes the read candidates highest number first and returns the first
  /// valid copy.
  ReadOutcome read(DataId id) const {
    ReadOutcome out;
    if (params_.empty()) return out;
    const auto candidates = select_read_candidates(params_, id, draw_);
    out.stats.candidates_counted = static_cast<std::uint32_t>(candidates.size());
    for (ServerNumber s : candidates) {
      ++out.stats.probes_until_hit;
      const auto& store = servers_[s.index()].store;
      auto it = store.find(id);
      if (it != store.end() && it->second.valid) {
        out.stats.found = true;
        out.location = Location{s, it->second.version};
        return out;
      }
    }
    return out;
  }

  /// Marks `victim` retired and reconfigures. Its stored copies stay in
  /// place (for the caller to redistribute) but are never probed again.
  void retire(ServerNumber victim) {
    server_mut(victim);
    servers_[victim.index()].retired = true;
    auto volumes = free_volumes();
    params_ = retire_server(params_, victim, volumes);
    epochs_.push_back(EpochRecord{std::move(volumes), params_});
  }

  /// Checksum over every stored (server, id, version, valid) tuple.
  std::uint64_t digest() const {
    detail::DigestBuilder d;
    std::vector<std::pair<DataId, StoredEntry>> entries;
    for (const auto& server : servers_) {
      entries.assign(server.store.begin(), server.store.end());
      std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      std::uint64_t h = detail::kServerSeed;
      for (const auto& [id, e] : entries) h = detail::fold_entry(h, id, e.version, e.valid);
      d.add_server(server.number, entries.size(), h);
    }
    return d.h;
  }

 private:
  SimServer& server_mut(ServerNumber s) {
    if (s.index() >= servers_.size()) throw ContractError("unknown server " + std::to_string(s.value));
    return servers_[s.index()];
  }

  OverflowPolicy overflow_;
  R draw_;
  std::vector<SimServer> servers_;
  ParamTable params_;
  std::vector<EpochRecord> epochs_;
  std::unordered_map<DataId, std::uint64_t> versions_;
};

using SimCluster = BasicCluster<MixRand>;

/// Compact cluster for write-once workloads where ids are issued
/// sequentially (`id_base`, `id_base + 1`, ...) and never rewritten. Keeps
/// one writer number per datum instead of per-server stores, which is what
/// the large sweeps need. Every id has version 1 and is always valid.
template <RandSource R = MixRand>
class BasicStreamCluster {
 public:
  explicit BasicStreamCluster(std::uint64_t id_base = 0, OverflowPolicy overflow = OverflowPolicy::reject,
                              R draw = {})
      : id_base_(id_base), overflow_(overflow), draw_(std::move(draw)) {}

  ServerNumber add_server(Bytes capacity) {
    if (capacity_.size() >= std::numeric_limits<std::uint16_t>::max())
      throw ContractError("stream cluster holds at most 65535 servers");
    const ServerNumber s(static_cast<std::uint32_t>(capacity_.size()));
    capacity_.push_back(capacity);
    used_.push_back(0);
    count_.push_back(0);
    hash_.push_back(detail::kServerSeed);
    return s;
  }

  void set_capacity(ServerNumber s, Bytes capacity) { capacity_.at(s.index()) = capacity; }

  void reconfigure() {
    auto volumes = free_volumes();
    params_ = seqcheck::reconfigure(params_, volumes);
    epochs_.push_back(EpochRecord{std::move(volumes), params_});
  }

  void reserve(std::size_t n) { writer_.reserve(n); }

  std::size_t server_count() const { return capacity_.size(); }
  Bytes capacity(ServerNumber s) const { return capacity_.at(s.index()); }
  Bytes used(ServerNumber s) const { return used_.at(s.index()); }
  std::uint64_t stored_count(ServerNumber s) const { return count_.at(s.index()); }
  Bytes capacity_total() const { return capacity_total_cached(); }
  Bytes used_total() const { return used_total_; }

  std::vector<FreeVolume> free_volumes() const {
    std::vector<FreeVolume> out(capacity_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = used_[i] >= capacity_[i] ? 0 : capacity_[i] - used_[i];
    return out;
  }

  const ParamTable& params() const { return params_; }
  const std::vector<EpochRecord>& epochs() const { return epochs_; }

  std::uint64_t written() const { return writer_.size(); }
  DataId id_at(std::uint64_t index) const { return DataId(id_base_ + index); }
  ServerNumber writer_at(std::uint64_t index) const { return ServerNumber(writer_.at(index)); }

  /// Writes the next id in the stream. A rejected write consumes no id.
  WriteOutcome append(Bytes size) {
    if (params_.empty()) throw ContractError("write before the first reconfigure()");
    const DataId id = id_at(writer_.size());
    WriteOutcome out;
    out.writer = find_writer(params_, id, draw_);
    out.version = 1;
    const std::size_t w = out.writer.index();
    if (overflow_ == OverflowPolicy::reject && used_[w] + size > capacity_[w]) {
      out.status = WriteStatus::writer_full;
      return out;
    }
    // Servers above the writer that would have been told to invalidate.
    const auto rp = params_.read_p();
    for (std::size_t t = w + 1; t < rp.size(); ++t)
      if (rp[t] > 0.0 && rp[t] > static_cast<double>(draw_(ServerNumber(static_cast<std::uint32_t>(t)), id)))
        ++out.invalidate_commands;
    used_[w] += size;
    used_total_ += size;
    ++count_[w];
    hash_[w] = detail::fold_entry(hash_[w], id, 1, true);
    writer_.push_back(static_cast<std::uint16_t>(w));
    return out;
  }

  /// Probe statistics for reading datum number `index` under the current
  /// table.
  ProbeStats read_stats(std::uint64_t index) const {
    const auto pc = count_probes(params_, id_at(index), writer_at(index), draw_);
    ProbeStats out;
    out.candidates_counted = pc.candidates;
    out.found = pc.position != 0;
    out.probes_until_hit = out.found ? pc.position : pc.candidates;
    return out;
  }

  /// Probes until hit only; skips the full candidate count.
  std::uint32_t probes_until_hit(std::uint64_t index) const {
    const DataId id = id_at(index);
    const std::size_t w = writer_.at(index);
    const auto rp = params_.read_p();
    std::uint32_t probes = 1;
    for (std::size_t t = w + 1; t < rp.size(); ++t)
      if (rp[t] > 0.0 && rp[t] > static_cast<double>(draw_(ServerNumber(static_cast<std::uint32_t>(t)), id)))
        ++probes;
    return probes;
  }

  /// Same definition as BasicCluster::digest(), so both agree on a
  /// unique-id workload.
  std::uint64_t digest() const {
    detail::DigestBuilder d;
    for (std::size_t s = 0; s < capacity_.size(); ++s)
      d.add_server(ServerNumber(static_cast<std::uint32_t>(s)), count_[s], hash_[s]);
    return d.h;
  }

 private:
  Bytes capacity_total_cached() const {
    Bytes total = 0;
    for (Bytes c : capacity_) total += c;
    return total;
  }

  std::uint64_t id_base_;
  OverflowPolicy overflow_;
  R draw_;
  std::vector<Bytes> capacity_;
  std::vector<Bytes> used_;
  std::vector<std::uint64_t> count_;
  std::vector<std::uint64_t> hash_;
  Bytes used_total_ = 0;
  ParamTable params_;
  std::vector<EpochRecord> epochs_;
  std::vector<std::uint16_t> writer_;
};

using StreamCluster = BasicStreamCluster<MixRand>;

/// Growth rule: when the cluster is at least `threshold` full, grow the
/// newest server by `increment` (capped at `max_volume`); once the newest is
/// at `max_volume`, append a server of `initial_volume` instead.
struct ExpansionPolicy {
  double threshold = 0.5;
  Bytes initial_volume = 100 * kTB;
  Bytes increment = 100 * kTB;
  Bytes max_volume = 1 * kPB;
  std::uint32_t max_servers = 256;

  void validate() const {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ContractError("threshold outside [0, 1]");
    if (initial_volume == 0 || increment == 0 || max_volume < initial_volume || max_servers == 0)
      throw ContractError("invalid expansion policy volumes");
  }
};

template <typename C>
concept ExpandableCluster = requires(C& c, const C& cc, ServerNumber s, Bytes b) {
  { cc.server_count() } -> std::convertible_to<std::size_t>;
  { cc.capacity(s) } -> std::convertible_to<Bytes>;
  { cc.capacity_total() } -> std::convertible_to<Bytes>;
  { cc.used_total() } -> std::convertible_to<Bytes>;
  c.add_server(b);
  c.set_capacity(s, b);
  c.reconfigure();
};

/// First server of a fresh cluster.
template <ExpandableCluster C>
void bootstrap(C& cluster, const ExpansionPolicy& policy) {
  policy.validate();
  if (cluster.server_count() != 0) throw ContractError("bootstrap on a non-empty cluster");
  cluster.add_server(policy.initial_volume);
  cluster.reconfigure();
}

template <ExpandableCluster C>
bool can_expand(const C& cluster, const ExpansionPolicy& policy) {
  if (cluster.server_count() == 0) return true;
  const ServerNumber newest(static_cast<std::uint32_t>(cluster.server_count() - 1));
  return cluster.capacity(newest) < policy.max_volume || cluster.server_count() < policy.max_servers;
}

/// Performs one expansion event and reconfigures. Returns false when the
/// policy is saturated.
template <ExpandableCluster C>
bool expand_once(C& cluster, const ExpansionPolicy& policy) {
  if (cluster.server_count() == 0) {
    bootstrap(cluster, policy);
    return true;
  }
  const ServerNumber newest(static_cast<std::uint32_t>(cluster.server_count() - 1));
  const Bytes cap = cluster.capacity(newest);
  if (cap < policy.max_volume) {
    cluster.set_capacity(newest, std::min(policy.max_volume, cap + policy.increment));
  } else if (cluster.server_count() < policy.max_servers) {
    cluster.add_server(policy.initial_volume);
  } else {
    return false;
  }
  cluster.reconfigure();
  return true;
}

template <ExpandableCluster C>
bool fill_reached(const C& cluster, double threshold) {
  const Bytes cap = cluster.capacity_total();
  return static_cast<long double>(cluster.used_total()) >= static_cast<long double>(threshold) * cap;
}

/// Expands for as long as the fill threshold is met. Returns the number of
/// expansion events.
template <ExpandableCluster C>
std::size_t apply_expansion_policy(C& cluster, const ExpansionPolicy& policy) {
  std::size_t events = 0;
  while (fill_reached(cluster, policy.threshold) && expand_once(cluster, policy)) ++events;
  return events;
}

}  // namespace seqcheck
