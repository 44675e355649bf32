#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>

namespace seqcheck {

/// max over servers of |load - mean| / mean.
inline double imbalance(std::span<const std::uint64_t> loads) {
  if (loads.empty()) return 0.0;
  const long double mean =
      std::accumulate(loads.begin(), loads.end(), static_cast<long double>(0)) / static_cast<long double>(loads.size());
  if (mean == 0) return 0.0;
  long double worst = 0;
  for (auto l : loads) worst = std::max(worst, std::fabs(static_cast<long double>(l) - mean) / mean);
  return static_cast<double>(worst);
}

/// max over i of |actual[i] - expected[i]| / expected[i]; zero expectations
/// are skipped.
inline double max_relative_error(std::span<const std::uint64_t> actual, std::span<const double> expected) {
  double worst = 0.0;
  for (std::size_t i = 0; i < actual.size() && i < expected.size(); ++i) {
    if (expected[i] <= 0.0) continue;
    worst = std::max(worst, std::fabs(static_cast<double>(actual[i]) - expected[i]) / expected[i]);
  }
  return worst;
}

}  // namespace seqcheck
