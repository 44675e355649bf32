#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "seqcheck/types.hpp"

namespace seqcheck::experiments {

/// One in-run tolerance check: what the reference reports, what we measured.
struct Check {
  std::string name;
  std::string target;
  double measured = 0.0;
  bool passed = false;
};

struct RunReport {
  std::string experiment;
  std::string csv;
  std::vector<Check> checks;
  std::optional<std::uint64_t> digest;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  void check(std::string name, std::string target, double measured, bool ok) {
    checks.push_back(Check{std::move(name), std::move(target), measured, ok});
  }
};

/// Six significant digits, "%g" style. Non-finite values print as "nan".
inline std::string fmt_num(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header) {
    bool first = true;
    for (auto h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }

  CsvWriter& cell(double v) { return raw(fmt_num(v)); }
  CsvWriter& cell(std::uint64_t v) { return raw(std::to_string(v)); }
  CsvWriter& cell(std::uint32_t v) { return raw(std::to_string(v)); }
  CsvWriter& cell(int v) { return raw(std::to_string(v)); }
  CsvWriter& cell(std::string_view v) { return raw(std::string(v)); }
  CsvWriter& cell(const char* v) { return raw(v); }

  void end_row() {
    out_ << '\n';
    first_ = true;
  }

  std::string str() const { return out_.str(); }

 private:
  CsvWriter& raw(const std::string& s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
  }

  std::ostringstream out_;
  bool first_ = true;
};

/// First id of workload stream `stream` under `seed`. Each stream owns
/// 2^32 consecutive ids.
inline std::uint64_t workload_base(std::uint64_t seed, std::uint64_t stream) {
  if (seed >= (1ULL << 24)) throw ContractError("seed must be below 2^24");
  if (stream >= 256) throw ContractError("workload stream must be below 256");
  return (seed << 40) | (stream << 32);
}

/// Runs fn(0..n-1) on a small thread pool and returns results in index
/// order.
template <typename T>
std::vector<T> parallel_indexed(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<T> results(n);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) results[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

inline bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

inline std::string pct(double v) { return fmt_num(v * 100.0) + "%"; }

}  // namespace seqcheck::experiments
