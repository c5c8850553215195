#include "bc/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "bc/error.hpp"

namespace bc {

Ratio::Ratio(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  const std::uint64_t g = std::gcd(n, d);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
}

std::string Ratio::str() const { return std::to_string(num) + "/" + std::to_string(den); }

MetricsReport evaluate(std::span<const Statement> m, std::span<const Statement> c,
                       std::size_t size_chars, bool truncated) {
  std::unordered_set<Statement, StatementHash> cs(c.begin(), c.end());
  if (cs.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus is empty");
  std::unordered_set<Statement, StatementHash> ms(m.begin(), m.end());

  MetricsReport r;
  r.size_chars = size_chars;
  r.truncated = truncated;
  r.m_count = ms.size();
  r.c_count = cs.size();
  for (const Statement& s : ms) {
    if (cs.contains(s)) ++r.intersection_count;
  }
  r.accuracy = r.m_count == 0 ? Ratio() : Ratio(r.intersection_count, r.m_count);
  r.completeness = Ratio(r.intersection_count, r.c_count);
  return r;
}

namespace {

__extension__ using Wide = unsigned __int128;

// Exact comparison of two fractions.
int compare(const Ratio& x, const Ratio& y) {
  const Wide l = static_cast<Wide>(x.num) * y.den;
  const Wide r = static_cast<Wide>(y.num) * x.den;
  return l < r ? -1 : l > r ? 1 : 0;
}

struct RatioLess {
  bool operator()(const Ratio& a, const Ratio& b) const { return compare(a, b) < 0; }
};

}  // namespace

std::vector<FrontierPoint> pareto_filter(std::span<const FrontierPoint> points) {
  // Sweep by increasing size. `stair` holds the accuracy -> completeness
  // staircase of every strictly smaller program: completeness decreases as
  // accuracy grows, so the first entry at or above an accuracy carries the best
  // completeness available there.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const MetricsReport& x = points[a].report;
    const MetricsReport& y = points[b].report;
    if (x.size_chars != y.size_chars) return x.size_chars < y.size_chars;
    const int acc = compare(x.accuracy, y.accuracy);
    if (acc != 0) return acc > 0;
    return compare(x.completeness, y.completeness) > 0;
  });

  std::map<Ratio, Ratio, RatioLess> stair;
  auto stair_insert = [&](const Ratio& acc, const Ratio& comp) {
    auto it = stair.lower_bound(acc);
    if (it != stair.end() && compare(it->second, comp) >= 0) return;
    auto pos = stair.insert_or_assign(acc, comp).first;
    while (pos != stair.begin()) {
      auto prev = std::prev(pos);
      if (compare(prev->second, comp) > 0) break;
      stair.erase(prev);
    }
  };

  std::vector<bool> keep(points.size(), false);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t group_end = i;
    const std::size_t size = points[order[i]].report.size_chars;
    while (group_end < order.size() && points[order[group_end]].report.size_chars == size) ++group_end;

    // Same size: beaten by strictly higher accuracy with completeness at least
    // as good, or by equal accuracy with strictly better completeness.
    std::optional<Ratio> best_comp_higher;
    std::size_t j = i;
    while (j < group_end) {
      std::size_t acc_end = j;
      const Ratio acc = points[order[j]].report.accuracy;
      while (acc_end < group_end && compare(points[order[acc_end]].report.accuracy, acc) == 0) ++acc_end;
      const Ratio top_comp = points[order[j]].report.completeness;
      for (std::size_t k = j; k < acc_end; ++k) {
        const MetricsReport& p = points[order[k]].report;
        bool dominated = compare(top_comp, p.completeness) > 0 ||
                         (best_comp_higher && compare(*best_comp_higher, p.completeness) >= 0);
        if (!dominated) {
          auto it = stair.lower_bound(p.accuracy);
          dominated = it != stair.end() && compare(it->second, p.completeness) >= 0;
        }
        keep[order[k]] = !dominated;
      }
      if (!best_comp_higher || compare(top_comp, *best_comp_higher) > 0) best_comp_higher = top_comp;
      j = acc_end;
    }
    for (std::size_t k = i; k < group_end; ++k) {
      const MetricsReport& p = points[order[k]].report;
      stair_insert(p.accuracy, p.completeness);
    }
    i = group_end;
  }

  std::vector<FrontierPoint> kept;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (keep[k]) kept.push_back(points[k]);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    if (a.report.size_chars != b.report.size_chars) return a.report.size_chars < b.report.size_chars;
    return compare(a.report.accuracy, b.report.accuracy) < 0;
  });
  return kept;
}

std::string format_decimal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string csv_row(const FrontierPoint& point) {
  const MetricsReport& r = point.report;
  std::ostringstream out;
  out << point.method_label << ',' << point.budget_chars << ',' << r.size_chars << ','
      << format_decimal(r.accuracy.value()) << ',' << format_decimal(r.completeness.value()) << ','
      << r.m_count << ',' << r.c_count << ',' << r.intersection_count << ','
      << (r.truncated ? "true" : "false");
  return out.str();
}

std::string key_value_report(const MetricsReport& r) {
  std::ostringstream out;
  out << "accuracy=" << format_decimal(r.accuracy.value()) << '\n'
      << "accuracy_exact=" << r.accuracy.str() << '\n'
      << "completeness=" << format_decimal(r.completeness.value()) << '\n'
      << "completeness_exact=" << r.completeness.str() << '\n'
      << "size_chars=" << r.size_chars << '\n'
      << "m=" << r.m_count << '\n'
      << "c=" << r.c_count << '\n'
      << "intersection=" << r.intersection_count << '\n'
      << "truncated=" << (r.truncated ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace bc
