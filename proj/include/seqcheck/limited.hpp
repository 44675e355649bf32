#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "seqcheck/placement.hpp"
#include "seqcheck/prng.hpp"
#include "seqcheck/types.hpp"

namespace seqcheck {

// Configuration changes. Only AppendServer and growth of the newest server
// are legal for the single-parameter variant; the rest exist so callers can
// express them and get a clean rejection.
struct AppendServer {
  FreeVolume volume = 0;
};
struct GrowLast {
  Bytes delta = 0;
};
struct GrowServer {
  ServerNumber server;
  Bytes delta = 0;
};
struct ShrinkServer {
  ServerNumber server;
  Bytes delta = 0;
};
struct RemoveServer {
  ServerNumber server;
};

using ConfigChange = std::variant<AppendServer, GrowLast, GrowServer, ShrinkServer, RemoveServer>;

class IllegalChange : public ContractError {
 public:
  using ContractError::ContractError;
};

/// Single merged parameter per server. Valid only while the configuration
/// evolves by appending servers or growing the newest one, in which case
/// ReadP and WriteP never diverge and no write ever needs to invalidate.
class LimitedParamTable {
 public:
  std::size_t size() const { return p_.size(); }
  bool empty() const { return p_.empty(); }
  std::uint64_t epoch() const { return epoch_; }
  std::span<const double> p() const { return p_; }
  double p(ServerNumber s) const { return p_.at(s.index()); }
  /// Free volume each server had when its parameter was last set.
  std::span<const FreeVolume> volumes() const { return volumes_; }

  /// The same state as a two-parameter table (ReadP == WriteP).
  ParamTable as_param_table() const { return ParamTable::from_vectors(p_, p_, epoch_); }

 private:
  friend LimitedParamTable limited_reconfigure(const LimitedParamTable&, const ConfigChange&);

  std::vector<double> p_;
  std::vector<FreeVolume> volumes_;
  std::uint64_t epoch_ = 0;
};

inline LimitedParamTable limited_reconfigure(const LimitedParamTable& table, const ConfigChange& change) {
  LimitedParamTable next = table;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, AppendServer>) {
          next.volumes_.push_back(c.volume);
          next.p_.push_back(0.0);
        } else if constexpr (std::is_same_v<T, GrowLast>) {
          if (next.empty()) throw IllegalChange("grow-last on an empty table");
          next.volumes_.back() += c.delta;
        } else if constexpr (std::is_same_v<T, GrowServer>) {
          if (next.empty() || c.server.index() + 1 != next.size())
            throw IllegalChange("only the newest server may grow (server " + std::to_string(c.server.value) + ")");
          next.volumes_.back() += c.delta;
        } else if constexpr (std::is_same_v<T, ShrinkServer>) {
          throw IllegalChange("shrinking a server is not allowed");
        } else {
          throw IllegalChange("removing a server is not allowed");
        }
      },
      change);
  // Only the newest entry moves; its prefix is unchanged, so the quotient
  // can only grow.
  const unsigned __int128 prefix =
      std::accumulate(next.volumes_.begin(), next.volumes_.end(), static_cast<unsigned __int128>(0));
  const std::size_t last = next.size() - 1;
  if (last == 0) {
    next.p_[last] = 1.0;
  } else if (prefix == 0) {
    next.p_[last] = 0.0;
  } else if (prefix == next.volumes_[last]) {
    next.p_[last] = 1.0;
  } else {
    next.p_[last] = static_cast<double>(next.volumes_[last]) / static_cast<double>(prefix);
  }
  ++next.epoch_;
  return next;
}

template <RandSource R = MixRand>
ServerNumber limited_writer(const LimitedParamTable& table, DataId id, const R& draw = {}) {
  const auto p = table.p();
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] <= 0.0) continue;
    const ServerNumber s(static_cast<std::uint32_t>(i));
    if (p[i] > static_cast<double>(draw(s, id))) return s;
  }
  throw NoWriter();
}

template <RandSource R = MixRand>
std::vector<ServerNumber> limited_read_candidates(const LimitedParamTable& table, DataId id, const R& draw = {}) {
  return select_read_candidates(table.as_param_table(), id, draw);
}

}  // namespace seqcheck
