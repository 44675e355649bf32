#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "seqcheck/sim_cluster.hpp"

namespace seqcheck {

class LastServer : public ContractError {
 public:
  LastServer() : ContractError("cannot delete the only server able to hold data") {}
};

struct Redistribution {
  DataId id;
  std::uint64_t version = 0;
  ServerNumber new_writer;
};

struct DeletionResult {
  ParamTable params;
  std::vector<Redistribution> moved;
};

/// Takes `victim` out of the cluster. Parameters are recalculated first
/// (victim pinned at 0.0, its volume counted as zero); then every datum whose
/// readable copy lived on the victim is re-written through the normal write
/// path, keeping its version.
///
/// Copies on the victim that a read would not have returned are stale and
/// are dropped rather than moved.
template <RandSource R>
DeletionResult delete_server(BasicCluster<R>& cluster, ServerNumber victim) {
  if (victim.index() >= cluster.server_count()) throw ContractError("unknown server " + std::to_string(victim.value));
  const SimServer& doomed = cluster.server(victim);
  if (doomed.retired) throw ContractError("server " + std::to_string(victim.value) + " already deleted");
  bool other_has_room = false;
  for (const auto& s : cluster.servers())
    if (s.number != victim && !s.retired && s.free() > 0) other_has_room = true;
  if (!other_has_room) throw LastServer();

  struct Pending {
    DataId id;
    std::uint64_t version;
    Bytes size;
  };
  std::vector<Pending> pending;
  for (const auto& [id, entry] : doomed.store) {
    if (!entry.valid) continue;
    const auto hit = cluster.read(id);
    if (hit.location && hit.location->server == victim) pending.push_back({id, entry.version, entry.size});
  }
  std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) { return a.id < b.id; });

  cluster.retire(victim);

  DeletionResult out;
  out.params = cluster.params();
  out.moved.reserve(pending.size());
  for (const auto& p : pending) {
    const auto w = cluster.write_version(p.id, p.size, p.version);
    if (w.status != WriteStatus::stored)
      throw Error("redistribution target " + std::to_string(w.writer.value) + " is full");
    out.moved.push_back({p.id, p.version, w.writer});
  }
  return out;
}

}  // namespace seqcheck
