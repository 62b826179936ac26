#pragma once

// 1-D support recovery from an unlabeled difference multiset (the turnpike
// problem), and the two-parameter family of six-point homometric pairs that
// are the only collision-free exceptions to uniqueness.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sparsepr/core.hpp"
#include "sparsepr/error.hpp"
#include "sparsepr/scalar.hpp"
#include "sparsepr/types.hpp"

namespace sparsepr {

/// N with N(N-1)/2 == count, if any (N >= 2).
inline std::optional<std::size_t> points_for_difference_count(std::size_t count) {
  for (std::size_t n = 2; n * (n - 1) / 2 <= count; ++n) {
    if (n * (n - 1) / 2 == count) return n;
  }
  return std::nullopt;
}

/// Sorted multiset of positive lags with |D| = N(N-1)/2.
template <Scalar T>
class DifferenceMultiset {
 public:
  explicit DifferenceMultiset(std::vector<T> diffs, const Tolerance& tol = {}) : values_(std::move(diffs)) {
    for (const T& d : values_) {
      if (position_sign(d, tol) <= 0) {
        throw Error(ErrorKind::InvalidCardinality, "differences must be strictly positive");
      }
    }
    const auto n = points_for_difference_count(values_.size());
    if (!n) {
      throw Error(ErrorKind::InvalidCardinality,
                  std::to_string(values_.size()) + " differences is not N(N-1)/2 for any N >= 2");
    }
    n_ = *n;
    std::sort(values_.begin(), values_.end());
  }

  /// Positive lags of a 1-D ACF, one entry per lag.
  static DifferenceMultiset from_acf(const DeltaAcf<T>& acf, const Tolerance& tol = {}) {
    return DifferenceMultiset(positive_lags_1d(acf, tol), tol);
  }

  static DifferenceMultiset from_support(const std::vector<T>& positions, const Tolerance& tol = {}) {
    return DifferenceMultiset(difference_multiset(positions), tol);
  }

  const std::vector<T>& values() const noexcept { return values_; }
  std::size_t implied_n() const noexcept { return n_; }
  const T& max() const { return values_.back(); }

  bool has_repeats(const Tolerance& tol = {}) const {
    for (std::size_t i = 1; i < values_.size(); ++i) {
      if (same_position(values_[i - 1], values_[i], tol)) return true;
    }
    return false;
  }

 private:
  std::vector<T> values_;
  std::size_t n_ = 0;
};

namespace detail {

/// Sorted pool of differences with removal flags. Floating lookups remove
/// the closest unused value inside the tolerance window.
template <Scalar T>
class DiffPool {
 public:
  DiffPool(const std::vector<T>& sorted, const Tolerance& tol)
      : values_(sorted), used_(sorted.size(), false), tol_(tol), remaining_(sorted.size()) {}

  std::optional<std::size_t> take(const T& v) {
    const T lo = [&] {
      if constexpr (is_exact_v<T>) return v;
      else return v - tol_.position;
    }();
    auto first = std::lower_bound(values_.begin(), values_.end(), lo);
    std::optional<std::size_t> best;
    for (auto it = first; it != values_.end(); ++it) {
      if (compare_position(*it, v, tol_) > 0) break;
      const auto idx = static_cast<std::size_t>(it - values_.begin());
      if (used_[idx]) continue;
      if (!best || abs_value(T(*it - v)) < abs_value(T(values_[*best] - v))) best = idx;
      if constexpr (is_exact_v<T>) break;
    }
    if (best) {
      used_[*best] = true;
      --remaining_;
    }
    return best;
  }

  void release(std::size_t idx) {
    used_[idx] = false;
    ++remaining_;
  }

  std::optional<std::size_t> largest_unused() const {
    for (std::size_t i = values_.size(); i-- > 0;) {
      if (!used_[i]) return i;
    }
    return std::nullopt;
  }

  const T& value(std::size_t idx) const { return values_[idx]; }
  bool empty() const noexcept { return remaining_ == 0; }

 private:
  std::vector<T> values_;
  std::vector<bool> used_;
  Tolerance tol_;
  std::size_t remaining_;
};

template <Scalar T>
void turnpike_search(std::vector<T>& points, DiffPool<T>& pool, const T& width, bool first_level,
                     const Tolerance& tol, std::vector<std::vector<T>>& solutions) {
  if (pool.empty()) {
    solutions.push_back(points);
    return;
  }
  const T d = pool.value(*pool.largest_unused());
  std::vector<T> candidates{d};
  const T mirrored = width - d;
  if (!first_level && !same_position(mirrored, d, tol)) candidates.push_back(mirrored);

  for (const T& y : candidates) {
    std::vector<std::size_t> taken;
    bool ok = true;
    for (const T& p : points) {
      auto idx = pool.take(abs_value(T(y - p)));
      if (!idx) {
        ok = false;
        break;
      }
      taken.push_back(*idx);
    }
    if (ok) {
      points.push_back(y);
      turnpike_search(points, pool, width, false, tol, solutions);
      points.pop_back();
    }
    for (auto idx : taken) pool.release(idx);
  }
}

}  // namespace detail

/// Every support (up to translation and reflection) whose difference
/// multiset equals `diffs`, via backtracking: pin 0 and max(D), then place
/// the largest unused difference at d or max - d.
template <Scalar T>
std::vector<EquivalenceClass<T>> solve_turnpike(const DifferenceMultiset<T>& diffs, const Tolerance& tol = {}) {
  detail::DiffPool<T> pool(diffs.values(), tol);
  const T width = diffs.max();
  pool.take(width);
  std::vector<T> points{T(0), width};
  std::vector<std::vector<T>> raw;
  detail::turnpike_search(points, pool, width, true, tol, raw);

  std::vector<EquivalenceClass<T>> classes;
  for (auto& s : raw) {
    std::sort(s.begin(), s.end());
    classes.push_back(canonicalize(make_support_1d(s, tol), tol));
  }
  return unique_classes(std::move(classes), tol);
}

// ---------------------------------------------------------------------------
// Six-point homometric family.

enum class BekirBranch { X, Y };

constexpr const char* to_string(BekirBranch b) { return b == BekirBranch::X ? "X" : "Y"; }

/// The two fixed 6x2 integer models: support = Q * (p1, p2).
struct BekirFamily {
  static constexpr std::array<std::array<int, 2>, 6> kQx{{{0, 0}, {1, 0}, {-2, 1}, {-2, 2}, {0, 2}, {-1, 3}}};
  static constexpr std::array<std::array<int, 2>, 6> kQy{{{0, 0}, {1, 0}, {2, 1}, {1, 2}, {-1, 2}, {-1, 3}}};

  static constexpr const std::array<std::array<int, 2>, 6>& model(BekirBranch b) {
    return b == BekirBranch::X ? kQx : kQy;
  }

  /// Q * p in model row order.
  template <Scalar T>
  static std::vector<T> points(const T& p1, const T& p2, BekirBranch branch) {
    std::vector<T> out;
    for (const auto& row : model(branch)) out.push_back(T(row[0]) * p1 + T(row[1]) * p2);
    return out;
  }

  /// The sorting permutation for this p: sorted[i] = points[perm[i]].
  template <Scalar T>
  static std::array<std::size_t, 6> sort_permutation(const T& p1, const T& p2, BekirBranch branch) {
    const auto pts = points(p1, p2, branch);
    std::array<std::size_t, 6> perm{};
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    return perm;
  }

  template <Scalar T>
  static std::vector<T> sorted_points(const T& p1, const T& p2, BekirBranch branch) {
    auto pts = points(p1, p2, branch);
    std::sort(pts.begin(), pts.end());
    return pts;
  }
};

template <Scalar T>
struct BekirMatch {
  T p1;
  T p2;
  BekirBranch branch;
};

namespace detail {

template <Scalar T>
bool all_distinct_sorted(const std::vector<T>& sorted, const Tolerance& tol) {
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (same_position(sorted[i - 1], sorted[i], tol)) return false;
  }
  return true;
}

template <Scalar T>
bool same_sorted_sets(const std::vector<T>& a, const std::vector<T>& b, const Tolerance& tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_position(a[i], b[i], tol)) return false;
  }
  return true;
}

template <Scalar T>
bool collision_free_support(const std::vector<T>& positions, const Tolerance& tol) {
  return !DifferenceMultiset<T>::from_support(positions, tol).has_repeats(tol);
}

}  // namespace detail

/// Every (p, branch) such that the support equals Q p up to translation
/// and reflection. Candidate orderings: each element may play the role of
/// the model's 0, any other element the role of p1, and one further element
/// fixes p2 through the model row 2*p2 (X) or 2*p2 - p1 (Y).
template <Scalar T>
std::vector<BekirMatch<T>> bekir_memberships(std::vector<T> support, const Tolerance& tol = {}) {
  std::vector<BekirMatch<T>> matches;
  if (support.size() != 6) return matches;
  std::sort(support.begin(), support.end());
  if (!detail::all_distinct_sorted(support, tol)) return matches;

  for (bool reflect : {false, true}) {
    std::vector<T> s = support;
    if (reflect) {
      for (T& v : s) v = -v;
      std::sort(s.begin(), s.end());
    }
    for (const T& anchor : s) {
      std::vector<T> shifted;
      for (const T& v : s) shifted.push_back(v - anchor);
      for (BekirBranch branch : {BekirBranch::X, BekirBranch::Y}) {
        for (const T& p1 : shifted) {
          if (position_sign(p1, tol) == 0) continue;
          for (const T& t : shifted) {
            const T p2 = branch == BekirBranch::X ? T(t / 2) : T((t + p1) / 2);
            if (!detail::same_sorted_sets(BekirFamily::sorted_points(p1, p2, branch), shifted, tol)) continue;
            const bool seen = std::any_of(matches.begin(), matches.end(), [&](const BekirMatch<T>& m) {
              return m.branch == branch && same_position(m.p1, p1, tol) && same_position(m.p2, p2, tol);
            });
            if (!seen) matches.push_back({p1, p2, branch});
          }
        }
      }
    }
  }
  return matches;
}

/// The preferred (first-found) family parameters of a collision-free
/// six-point support, or nothing if it is not a family member.
template <Scalar T>
std::optional<BekirMatch<T>> is_bekir_member(const std::vector<T>& support, const Tolerance& tol = {}) {
  if (support.size() != 6) return std::nullopt;
  std::vector<T> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  if (!detail::all_distinct_sorted(sorted, tol) || !detail::collision_free_support(sorted, tol)) {
    return std::nullopt;
  }
  auto all = bekir_memberships(sorted, tol);
  if (all.empty()) return std::nullopt;
  return all.front();
}

template <Scalar T>
struct BekirPair {
  SpikeSignal<T> x;
  SpikeSignal<T> y;
  std::array<std::size_t, 6> perm_x;
  std::array<std::size_t, 6> perm_y;
};

/// Both supports for p, sorted ascending, with unit coefficients.
/// With `require_collision_free` (the default) p must give collision-free
/// difference sets; otherwise only distinctness is enforced.
template <Scalar T>
BekirPair<T> generate_bekir_pair(const T& p1, const T& p2, bool require_collision_free = true,
                                 const Tolerance& tol = {}) {
  const auto xs = BekirFamily::sorted_points(p1, p2, BekirBranch::X);
  const auto ys = BekirFamily::sorted_points(p1, p2, BekirBranch::Y);
  if (!detail::all_distinct_sorted(xs, tol) || !detail::all_distinct_sorted(ys, tol)) {
    throw Error(ErrorKind::DegenerateParameter, "p produces repeated support points");
  }
  if (require_collision_free &&
      (!detail::collision_free_support(xs, tol) || !detail::collision_free_support(ys, tol))) {
    throw Error(ErrorKind::DegenerateParameter, "p produces a difference set with collisions");
  }
  BekirPair<T> pair{make_support_1d(xs, tol), make_support_1d(ys, tol),
                    BekirFamily::sort_permutation(p1, p2, BekirBranch::X),
                    BekirFamily::sort_permutation(p1, p2, BekirBranch::Y)};
  if (same_class(pair.x, pair.y, tol)) {
    throw Error(ErrorKind::DegenerateParameter, "p makes the two supports equivalent");
  }
  return pair;
}

// ---------------------------------------------------------------------------

template <Scalar T>
struct SupportVerdict {
  enum class Kind { UniqueSupport, TwoSupports, HasCollisions, NoSupport };
  Kind kind;
  /// One class for UniqueSupport; X then Y for TwoSupports.
  std::vector<EquivalenceClass<T>> supports;
  std::optional<BekirMatch<T>> parameters;
};

template <Scalar T>
SupportVerdict<T> support_uniqueness(const DifferenceMultiset<T>& diffs, const Tolerance& tol = {}) {
  using Kind = typename SupportVerdict<T>::Kind;
  if (diffs.has_repeats(tol)) return {Kind::HasCollisions, {}, std::nullopt};
  auto classes = solve_turnpike(diffs, tol);
  if (classes.empty()) return {Kind::NoSupport, {}, std::nullopt};
  if (classes.size() == 1) return {Kind::UniqueSupport, std::move(classes), std::nullopt};
  if (classes.size() != 2 || diffs.implied_n() != 6) {
    throw std::logic_error("collision-free turnpike instance with more than one solution outside N = 6");
  }
  auto m0 = is_bekir_member(classes[0].representative.positions_1d(), tol);
  auto m1 = is_bekir_member(classes[1].representative.positions_1d(), tol);
  if (!m0 || !m1) throw std::logic_error("two turnpike solutions that are not family members");
  if (m0->branch == BekirBranch::Y && m1->branch == BekirBranch::X) {
    std::swap(classes[0], classes[1]);
    std::swap(m0, m1);
  }
  return {Kind::TwoSupports, std::move(classes), m0};
}

}  // namespace sparsepr
