#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seqcheck/prng.hpp"
#include "seqcheck/types.hpp"

namespace seqcheck {

/// Raised when a reconfiguration would drop servers from the table.
/// Servers leave only through `retire_server`.
class ShrinkingTable : public ContractError {
 public:
  ShrinkingTable() : ContractError("parameter vector shorter than the current table") {}
};

/// No server can accept a write (every WriteP is zero).
class NoWriter : public Error {
 public:
  NoWriter() : Error("no server has a positive write probability") {}
};

/// Write probability of every server from its free volume:
///   write_p[Y] = V_Y / (V_0 + ... + V_Y)
/// A zero prefix sum yields 1.0 for server 0 and 0.0 for any later server.
inline std::vector<double> compute_write_p(std::span<const FreeVolume> free_volumes) {
  std::vector<double> out(free_volumes.size(), 0.0);
  unsigned __int128 prefix = 0;
  for (std::size_t y = 0; y < free_volumes.size(); ++y) {
    prefix += free_volumes[y];
    if (prefix == 0) {
      out[y] = (y == 0) ? 1.0 : 0.0;
    } else if (prefix == free_volumes[y]) {
      out[y] = 1.0;
    } else {
      out[y] = static_cast<double>(free_volumes[y]) / static_cast<double>(prefix);
    }
  }
  return out;
}

/// Routing state for one configuration epoch. Immutable once built; every
/// reconfiguration yields a fresh table.
class ParamTable {
 public:
  ParamTable() = default;

  /// Builds a table from explicit vectors after checking every invariant.
  static ParamTable from_vectors(std::vector<double> write_p, std::vector<double> read_p,
                                 std::uint64_t epoch = 0, std::vector<bool> retired = {}) {
    ParamTable t;
    t.write_p_ = std::move(write_p);
    t.read_p_ = std::move(read_p);
    t.retired_ = std::move(retired);
    t.retired_.resize(t.write_p_.size(), false);
    t.epoch_ = epoch;
    t.validate();
    return t;
  }

  std::size_t size() const { return write_p_.size(); }
  bool empty() const { return write_p_.empty(); }
  std::uint64_t epoch() const { return epoch_; }

  double write_p(ServerNumber s) const { return write_p_.at(s.index()); }
  double read_p(ServerNumber s) const { return read_p_.at(s.index()); }
  std::span<const double> write_p() const { return write_p_; }
  std::span<const double> read_p() const { return read_p_; }

  bool is_retired(ServerNumber s) const { return s.index() < retired_.size() && retired_[s.index()]; }
  const std::vector<bool>& retired() const { return retired_; }

  void validate() const {
    if (read_p_.size() != write_p_.size()) throw ContractError("write_p/read_p length mismatch");
    for (std::size_t i = 0; i < size(); ++i) {
      const double w = write_p_[i];
      const double r = read_p_[i];
      if (!(w >= 0.0 && w <= 1.0) || !(r >= 0.0 && r <= 1.0))
        throw ContractError("probability outside [0, 1] at server " + std::to_string(i));
      if (r < w) throw ContractError("read_p < write_p at server " + std::to_string(i));
      if (retired_[i] && (w != 0.0 || r != 0.0))
        throw ContractError("retired server " + std::to_string(i) + " has non-zero parameters");
    }
    if (!empty() && !retired_[0] && (write_p_[0] != 1.0 || read_p_[0] != 1.0))
      throw ContractError("server 0 must have write_p = read_p = 1.0");
  }

 private:
  friend ParamTable update_read_p(const ParamTable&, std::span<const double>);
  friend ParamTable retire_server(const ParamTable&, ServerNumber, std::span<const FreeVolume>);

  std::vector<double> write_p_;
  std::vector<double> read_p_;
  std::vector<bool> retired_;
  std::uint64_t epoch_ = 0;
};

/// Installs a new WriteP vector and raises each ReadP to the running maximum
/// of every WriteP that server has ever had. New servers start at ReadP 0.0.
inline ParamTable update_read_p(const ParamTable& table, std::span<const double> new_write_p) {
  if (new_write_p.size() < table.size()) throw ShrinkingTable();
  ParamTable next;
  next.write_p_.assign(new_write_p.begin(), new_write_p.end());
  next.read_p_ = table.read_p_;
  next.read_p_.resize(new_write_p.size(), 0.0);
  next.retired_ = table.retired_;
  next.retired_.resize(new_write_p.size(), false);
  for (std::size_t i = 0; i < next.size(); ++i) {
    if (next.retired_[i]) {
      next.write_p_[i] = 0.0;
      next.read_p_[i] = 0.0;
    } else if (next.read_p_[i] < next.write_p_[i]) {
      next.read_p_[i] = next.write_p_[i];
    }
  }
  next.epoch_ = table.epoch_ + 1;
  next.validate();
  return next;
}

/// One configuration change: WriteP from the current free volumes, then the
/// ReadP running-max update. Retired servers count as zero volume.
inline ParamTable reconfigure(const ParamTable& table, std::span<const FreeVolume> free_volumes) {
  if (free_volumes.size() < table.size()) throw ShrinkingTable();
  std::vector<FreeVolume> volumes(free_volumes.begin(), free_volumes.end());
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table.is_retired(ServerNumber(static_cast<std::uint32_t>(i)))) volumes[i] = 0;
  auto write_p = compute_write_p(volumes);
  return update_read_p(table, write_p);
}

/// Removes `victim` from routing: both of its parameters become 0.0 for good
/// and every other server is reconfigured with the victim's volume zeroed.
inline ParamTable retire_server(const ParamTable& table, ServerNumber victim,
                                std::span<const FreeVolume> free_volumes) {
  if (victim.index() >= table.size()) throw ContractError("unknown server " + std::to_string(victim.value));
  ParamTable marked = table;
  marked.retired_[victim.index()] = true;
  marked.write_p_[victim.index()] = 0.0;
  marked.read_p_[victim.index()] = 0.0;
  return reconfigure(marked, free_volumes);
}

/// Writer plus the servers whose copy of the same id must be invalidated.
struct PlacementDecision {
  ServerNumber writer;
  std::vector<ServerNumber> invalidate;  // descending, all > writer
};

/// Highest-numbered server with write_p > draw. Allocation-free.
template <RandSource R = MixRand>
ServerNumber find_writer(const ParamTable& table, DataId id, const R& draw = {}) {
  const auto wp = table.write_p();
  for (std::size_t i = wp.size(); i-- > 0;) {
    // A zero probability can never beat a draw in [0, 1).
    if (wp[i] <= 0.0) continue;
    const ServerNumber s(static_cast<std::uint32_t>(i));
    if (wp[i] > static_cast<double>(draw(s, id))) return s;
  }
  throw NoWriter();
}

template <RandSource R = MixRand>
PlacementDecision select_writer(const ParamTable& table, DataId id, const R& draw = {}) {
  if (table.empty()) throw ContractError("select_writer on an empty table");
  const auto wp = table.write_p();
  const auto rp = table.read_p();
  PlacementDecision out;
  for (std::size_t i = wp.size(); i-- > 0;) {
    if (rp[i] <= 0.0) continue;
    const ServerNumber s(static_cast<std::uint32_t>(i));
    const double r = draw(s, id);
    if (wp[i] > r) {
      out.writer = s;
      return out;
    }
    if (rp[i] > r) out.invalidate.push_back(s);
  }
  throw NoWriter();
}

/// Every server with read_p > draw, highest number first. A reader probes
/// them in this order and stops at the first valid copy.
template <RandSource R = MixRand>
std::vector<ServerNumber> select_read_candidates(const ParamTable& table, DataId id, const R& draw = {}) {
  if (table.empty()) throw ContractError("select_read_candidates on an empty table");
  const auto rp = table.read_p();
  std::vector<ServerNumber> out;
  for (std::size_t i = rp.size(); i-- > 0;) {
    if (rp[i] <= 0.0) continue;
    const ServerNumber s(static_cast<std::uint32_t>(i));
    if (rp[i] > static_cast<double>(draw(s, id))) out.push_back(s);
  }
  return out;
}

template <RandSource R = MixRand>
bool is_read_candidate(const ParamTable& table, ServerNumber s, DataId id, const R& draw = {}) {
  const double p = table.read_p(s);
  return p > 0.0 && p > static_cast<double>(draw(s, id));
}

/// Position (1-based) at which a descending probe reaches `storing`, counted
/// alongside the total candidate count. `storing` must itself be a candidate
/// for the position to mean anything; otherwise position is 0.
struct ProbeCount {
  std::uint32_t candidates = 0;
  std::uint32_t position = 0;
};

template <RandSource R = MixRand>
ProbeCount count_probes(const ParamTable& table, DataId id, ServerNumber storing, const R& draw = {}) {
  const auto rp = table.read_p();
  ProbeCount out;
  for (std::size_t i = rp.size(); i-- > 0;) {
    if (rp[i] <= 0.0) continue;
    const ServerNumber s(static_cast<std::uint32_t>(i));
    if (rp[i] > static_cast<double>(draw(s, id))) {
      ++out.candidates;
      if (s == storing) out.position = out.candidates;
    }
  }
  return out;
}

}  // namespace seqcheck
