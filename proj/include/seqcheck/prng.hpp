#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "seqcheck/types.hpp"

namespace seqcheck {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Two-key hash: the key is whitened first, then used as the seed of a
/// SplitMix64 stream from which output number `stream + 1` is taken.
constexpr std::uint64_t mix64(std::uint64_t key, std::uint64_t stream) noexcept {
  return mix64(mix64(key) + (stream + 1) * kGoldenGamma);
}

/// Top 53 bits of `bits` as a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// A value in the half-open unit interval.
class UnitRand {
 public:
  constexpr explicit UnitRand(double v) : value_(v) {
    if (!(v >= 0.0 && v < 1.0)) throw ContractError("UnitRand outside [0, 1)");
  }
  constexpr double value() const { return value_; }
  constexpr operator double() const { return value_; }

 private:
  double value_;
};

/// Anything that maps (server number, data id) to a draw in [0, 1).
template <typename R>
concept RandSource = requires(const R& r, ServerNumber s, DataId d) {
  { r(s, d) } -> std::convertible_to<double>;
};

/// Default draw: stateless, platform-stable, 53 bits of mantissa.
struct MixRand {
  constexpr double operator()(ServerNumber s, DataId d) const noexcept {
    return to_unit(mix64(d.value, s.value));
  }
};

inline UnitRand unit_rand(ServerNumber s, DataId d) { return UnitRand(MixRand{}(s, d)); }

/// Fixed per-server draws that ignore the data id. Lets a hand-worked
/// configuration be replayed exactly.
class TableRand {
 public:
  explicit TableRand(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) (void)UnitRand(v);
  }
  double operator()(ServerNumber s, DataId) const { return values_.at(s.index()); }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Platform-stable 64-bit generator for workload parameters (volumes etc.).
class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  constexpr std::uint64_t next() noexcept { return mix64(state_ += kGoldenGamma); }
  constexpr double uniform() noexcept { return to_unit(next()); }
  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound).
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

static_assert(RandSource<MixRand>);
static_assert(RandSource<TableRand>);

}  // namespace seqcheck
