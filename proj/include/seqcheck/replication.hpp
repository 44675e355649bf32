#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "seqcheck/placement.hpp"
#include "seqcheck/sim_cluster.hpp"

namespace seqcheck {

/// N physical servers per logical group. Groups are numbered from 0 in the
/// order they were formed and behave like servers to the placement core.
struct GroupConfig {
  std::uint32_t replication_factor = 1;
  std::vector<std::vector<ServerNumber>> groups;

  void validate() const {
    if (replication_factor == 0) throw ContractError("replication factor must be positive");
    std::unordered_set<ServerNumber> seen;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].size() != replication_factor)
        throw ContractError("group " + std::to_string(g) + " does not have exactly N members");
      for (ServerNumber s : groups[g])
        if (!seen.insert(s).second) throw ContractError("server " + std::to_string(s.value) + " is in two groups");
    }
  }

  std::span<const ServerNumber> members(ServerNumber group) const { return groups.at(group.index()); }
};

/// Unique-data capacity of a group: every datum lands on every member, so
/// the fullest member binds.
inline FreeVolume group_free_volume(std::span<const FreeVolume> members, std::uint32_t n) {
  if (members.size() != n || n == 0) throw ContractError("group_free_volume: member count != N");
  return *std::min_element(members.begin(), members.end());
}

struct ReplicatedDecision {
  ServerNumber group;
  std::vector<ServerNumber> fan_out;             // members of `group`
  std::vector<ServerNumber> invalid_groups;      // descending
  std::vector<ServerNumber> invalidate_members;  // every member of every invalid group
};

/// Group-level write decision; the group number stands in for the server
/// number in the draw.
template <RandSource R = MixRand>
ReplicatedDecision replicated_write(const ParamTable& group_table, const GroupConfig& config, DataId id,
                                    const R& draw = {}) {
  if (group_table.size() != config.groups.size()) throw ContractError("table and group config disagree on size");
  auto d = select_writer(group_table, id, draw);
  ReplicatedDecision out;
  out.group = d.writer;
  const auto fan = config.members(d.writer);
  out.fan_out.assign(fan.begin(), fan.end());
  out.invalid_groups = std::move(d.invalidate);
  for (ServerNumber g : out.invalid_groups) {
    const auto m = config.members(g);
    out.invalidate_members.insert(out.invalidate_members.end(), m.begin(), m.end());
  }
  return out;
}

/// Simulated cluster of replica groups with member liveness.
template <RandSource R = MixRand>
class BasicReplicatedCluster {
 public:
  struct ReadResult {
    std::optional<Location> location;  // physical server that answered
    ServerNumber group;
    ProbeStats stats;
    bool unavailable = false;  // a candidate group had no live member
  };

  explicit BasicReplicatedCluster(std::uint32_t replication_factor, R draw = {}) : draw_(std::move(draw)) {
    config_.replication_factor = replication_factor;
  }

  /// Forms a new group from N fresh servers with the given capacities.
  ServerNumber add_group(std::span<const Bytes> capacities) {
    if (capacities.size() != config_.replication_factor) throw ContractError("add_group: need exactly N capacities");
    std::vector<ServerNumber> members;
    for (Bytes c : capacities) {
      members.push_back(ServerNumber(static_cast<std::uint32_t>(servers_.size())));
      servers_.push_back(SimServer{members.back(), c, 0, false, {}});
      alive_.push_back(true);
    }
    config_.groups.push_back(std::move(members));
    config_.validate();
    return ServerNumber(static_cast<std::uint32_t>(config_.groups.size() - 1));
  }

  void reconfigure() {
    std::vector<FreeVolume> volumes;
    for (std::size_t g = 0; g < config_.groups.size(); ++g) volumes.push_back(group_free(ServerNumber(static_cast<std::uint32_t>(g))));
    params_ = seqcheck::reconfigure(params_, volumes);
  }

  FreeVolume group_free(ServerNumber group) const {
    std::vector<FreeVolume> v;
    for (ServerNumber s : config_.members(group)) v.push_back(servers_[s.index()].free());
    return group_free_volume(v, config_.replication_factor);
  }

  void kill(ServerNumber server) { alive_.at(server.index()) = false; }
  void revive(ServerNumber server) { alive_.at(server.index()) = true; }
  bool alive(ServerNumber server) const { return alive_.at(server.index()); }

  const GroupConfig& config() const { return config_; }
  const ParamTable& params() const { return params_; }
  const SimServer& server(ServerNumber s) const { return servers_.at(s.index()); }

  /// Writes the next version to every live member of the chosen group and
  /// invalidates older copies on every member of each invalid group.
  /// Returns nullopt if the group has no room.
  std::optional<ReplicatedDecision> write(DataId id, Bytes size) {
    auto d = replicated_write(params_, config_, id, draw_);
    if (group_free(d.group) < size) return std::nullopt;
    const std::uint64_t version = ++versions_[id];
    for (ServerNumber s : d.invalidate_members) {
      auto& store = servers_[s.index()].store;
      if (auto it = store.find(id); it != store.end()) it->second.valid = false;
    }
    for (ServerNumber s : d.fan_out) {
      if (!alive_[s.index()]) continue;
      servers_[s.index()].used += size;
      servers_[s.index()].store[id] = StoredEntry{version, size, true};
    }
    return d;
  }

  ReadResult read(DataId id) const {
    ReadResult out;
    const auto groups = select_read_candidates(params_, id, draw_);
    out.stats.candidates_counted = static_cast<std::uint32_t>(groups.size());
    for (ServerNumber g : groups) {
      ++out.stats.probes_until_hit;
      bool any_alive = false;
      bool group_has_copy = false;
      for (ServerNumber s : config_.members(g)) {
        if (!alive_[s.index()]) continue;
        any_alive = true;
        const auto& store = servers_[s.index()].store;
        if (auto it = store.find(id); it != store.end() && it->second.valid) {
          out.location = Location{s, it->second.version};
          group_has_copy = true;
          break;
        }
      }
      if (group_has_copy) {
        out.group = g;
        out.stats.found = true;
        return out;
      }
      // Cannot tell whether the dead members held the newest copy.
      if (!any_alive) {
        out.unavailable = true;
        return out;
      }
    }
    return out;
  }

 private:
  R draw_;
  GroupConfig config_;
  std::vector<SimServer> servers_;
  std::vector<bool> alive_;
  ParamTable params_;
  std::unordered_map<DataId, std::uint64_t> versions_;
};

using ReplicatedCluster = BasicReplicatedCluster<MixRand>;

}  // namespace seqcheck
