#pragma once

// Full sweep of collision-free integer supports, comparing the backtracking
// solver against the exhaustive oracle on every instance.

#include <cstddef>
#include <functional>
#include <set>
#include <vector>

#include "sparsepr/oracle.hpp"
#include "sparsepr/turnpike.hpp"

namespace sparsepr {

struct SweepCase {
  std::vector<long long> support;
  std::size_t solver_classes;
  std::size_t oracle_classes;
};

struct SweepReport {
  std::size_t max_n = 0;
  long long bound = 0;
  std::size_t instances = 0;
  std::size_t agreements = 0;
  std::vector<SweepCase> disagreements;

  bool pass() const { return instances > 0 && disagreements.empty(); }
};

namespace detail {

inline bool distinct_differences(const std::vector<long long>& pts) {
  std::set<long long> seen;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (!seen.insert(pts[j] - pts[i]).second) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Every support {0 < ... < max} with 2 <= N <= max_n points, max <= bound
/// and no repeated difference.
inline SweepReport turnpike_sweep(std::size_t max_n, long long bound) {
  if (max_n < 2 || bound < 1) throw Error(ErrorKind::InvalidBound, "sweep needs max_n >= 2 and bound >= 1");
  SweepReport report;
  report.max_n = max_n;
  report.bound = bound;

  auto visit = [&](const std::vector<long long>& pts) {
    if (!detail::distinct_differences(pts)) return;
    ++report.instances;
    std::vector<Rational> positions(pts.begin(), pts.end());
    const auto solved = solve_turnpike(DifferenceMultiset<Rational>::from_support(positions));
    std::vector<long long> diffs;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) diffs.push_back(pts[j] - pts[i]);
    }
    const auto expected = oracle::exhaustive_turnpike(diffs, bound);
    bool agree = solved.size() == expected.size();
    for (std::size_t i = 0; agree && i < solved.size(); ++i) agree = same_class(solved[i], expected[i]);
    if (agree) ++report.agreements;
    else report.disagreements.push_back({pts, solved.size(), expected.size()});
  };

  for (std::size_t n = 2; n <= max_n; ++n) {
    for (long long width = static_cast<long long>(n) - 1; width <= bound; ++width) {
      std::vector<long long> pts{0};
      std::function<void(long long)> choose = [&](long long next) {
        if (pts.size() + 1 == n) {
          pts.push_back(width);
          visit(pts);
          pts.pop_back();
          return;
        }
        for (long long v = next; v < width; ++v) {
          pts.push_back(v);
          choose(v + 1);
          pts.pop_back();
        }
      };
      choose(1);
    }
  }
  return report;
}

}  // namespace sparsepr
