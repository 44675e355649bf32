#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "seqcheck/prng.hpp"
#include "seqcheck/types.hpp"

namespace seqcheck {

class DuplicateServer : public ContractError {
 public:
  explicit DuplicateServer(ServerNumber s) : ContractError("server " + std::to_string(s.value) + " already on ring") {}
};

class EmptyRing : public ContractError {
 public:
  EmptyRing() : ContractError("lookup on an empty hash ring") {}
};

inline constexpr std::uint64_t kRingPointSalt = 0xC0FFEE5EEDULL;
inline constexpr std::uint64_t kRingKeySalt = 0xD1CE0F5A1DULL;

/// Ring position of a datum.
constexpr std::uint64_t ring_key(DataId id) noexcept { return mix64(id.value ^ kRingKeySalt); }

/// Ring position of virtual node `vnode` of `server`; `attempt` > 0 only
/// when an earlier attempt collided.
constexpr std::uint64_t ring_point(ServerNumber server, std::uint32_t vnode, std::uint32_t attempt) noexcept {
  return mix64(server.value ^ kRingPointSalt, (static_cast<std::uint64_t>(attempt) << 32) | vnode);
}

/// Consistent hashing ring with virtual nodes. Value type: add/remove
/// return a new ring.
class HashRing {
 public:
  explicit HashRing(std::uint32_t vnodes_per_server = 100) : vnodes_(vnodes_per_server) {
    if (vnodes_ == 0) throw ContractError("vnodes_per_server must be positive");
  }

  std::uint32_t vnodes_per_server() const { return vnodes_; }
  const std::map<std::uint64_t, ServerNumber>& points() const { return points_; }
  const std::set<ServerNumber>& servers() const { return servers_; }
  bool empty() const { return points_.empty(); }

 private:
  friend HashRing ring_add(const HashRing&, ServerNumber);
  friend HashRing ring_remove(const HashRing&, ServerNumber);

  std::uint32_t vnodes_;
  std::map<std::uint64_t, ServerNumber> points_;
  std::set<ServerNumber> servers_;
};

inline HashRing ring_add(const HashRing& ring, ServerNumber server) {
  if (ring.servers_.contains(server)) throw DuplicateServer(server);
  HashRing next = ring;
  next.servers_.insert(server);
  for (std::uint32_t v = 0; v < next.vnodes_; ++v) {
    for (std::uint32_t attempt = 0;; ++attempt) {
      if (next.points_.emplace(ring_point(server, v, attempt), server).second) break;
    }
  }
  return next;
}

inline HashRing ring_remove(const HashRing& ring, ServerNumber server) {
  if (!ring.servers_.contains(server)) throw ContractError("server " + std::to_string(server.value) + " not on ring");
  HashRing next = ring;
  next.servers_.erase(server);
  std::erase_if(next.points_, [&](const auto& kv) { return kv.second == server; });
  return next;
}

/// Owner of the first point at or clockwise after `position`.
inline ServerNumber ring_owner(const HashRing& ring, std::uint64_t position) {
  if (ring.empty()) throw EmptyRing();
  auto it = ring.points().lower_bound(position);
  if (it == ring.points().end()) it = ring.points().begin();
  return it->second;
}

inline ServerNumber ring_locate(const HashRing& ring, DataId id) { return ring_owner(ring, ring_key(id)); }

/// Fraction of the key space each server owns, indexed by server number.
inline std::vector<double> ring_arc_fractions(const HashRing& ring) {
  if (ring.empty()) throw EmptyRing();
  std::vector<double> out(ring.servers().rbegin()->index() + 1, 0.0);
  const auto& pts = ring.points();
  std::uint64_t prev = pts.rbegin()->first;
  for (const auto& [pos, server] : pts) {
    // Arc (prev, pos]; unsigned wrap handles the first point.
    const std::uint64_t len = pos - prev;
    out[server.index()] += static_cast<double>(len) * 0x1.0p-64;
    prev = pos;
  }
  if (pts.size() == 1) out[pts.begin()->second.index()] = 1.0;
  return out;
}

}  // namespace seqcheck
