#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bc/syntax.hpp"

namespace bc {

/// Exact non-negative fraction, kept in lowest terms.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Ratio() = default;
  Ratio(std::uint64_t n, std::uint64_t d);

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;  // "2/3"

  bool operator==(const Ratio&) const = default;
};

struct MetricsReport {
  Ratio accuracy;
  Ratio completeness;
  std::size_t size_chars = 0;
  std::size_t m_count = 0;
  std::size_t c_count = 0;
  std::size_t intersection_count = 0;
  bool truncated = false;
};

/// Scores produced statements `m` against corpus `c` with set semantics.
/// Empty m scores accuracy 0; empty c throws EmptyCorpus.
MetricsReport evaluate(std::span<const Statement> m, std::span<const Statement> c,
                       std::size_t size_chars, bool truncated);

struct FrontierPoint {
  std::size_t budget_chars = 0;
  MetricsReport report;
  std::string method_label;
};

/// Keeps points not dominated in (accuracy, completeness, -size), ordered by
/// size then accuracy. Ties keep their input order.
std::vector<FrontierPoint> pareto_filter(std::span<const FrontierPoint> points);

/// Shortest round-trip decimal, always with a fractional part ("1.0", "0.5").
std::string format_decimal(double v);

inline constexpr const char* kCsvHeader =
    "method,budget,size,accuracy,completeness,m,c,intersection,truncated";

std::string csv_row(const FrontierPoint& point);
/// "key=value" lines.
std::string key_value_report(const MetricsReport& r);

}  // namespace bc
