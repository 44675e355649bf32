#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace seqcheck {

/// Index assigned to a server when it joins. Numbers start at 0 and are
/// never reassigned, even after a server is retired.
struct ServerNumber {
  std::uint32_t value = 0;

  constexpr ServerNumber() = default;
  constexpr explicit ServerNumber(std::uint32_t v) : value(v) {}
  constexpr auto operator<=>(const ServerNumber&) const = default;
  constexpr std::size_t index() const { return value; }
};

/// Opaque 64-bit datum identifier.
struct DataId {
  std::uint64_t value = 0;

  constexpr DataId() = default;
  constexpr explicit DataId(std::uint64_t v) : value(v) {}
  constexpr auto operator<=>(const DataId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, ServerNumber s) { return os << s.value; }
inline std::ostream& operator<<(std::ostream& os, DataId d) { return os << d.value; }

// Volumes and datum sizes are plain byte counts.
using Bytes = std::uint64_t;
using FreeVolume = Bytes;

inline constexpr Bytes kGB = 1'000'000'000ULL;
inline constexpr Bytes kTB = 1'000ULL * kGB;
inline constexpr Bytes kPB = 1'000ULL * kTB;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace seqcheck

template <>
struct std::hash<seqcheck::ServerNumber> {
  std::size_t operator()(seqcheck::ServerNumber s) const noexcept { return std::hash<std::uint32_t>{}(s.value); }
};

template <>
struct std::hash<seqcheck::DataId> {
  std::size_t operator()(seqcheck::DataId d) const noexcept { return std::hash<std::uint64_t>{}(d.value); }
};
