#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "sparsepr/error.hpp"
#include "sparsepr/scalar.hpp"
#include "sparsepr/types.hpp"

namespace sparsepr {

/// Lags x_m - x_n over unordered pairs n < m, oriented lexicographically
/// positive and grouped when they coincide (within tolerance).
template <Scalar T>
struct LagGroup {
  Point<T> lag;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (from, to): lag = x_to - x_from
  T coefficient{0};                                         // sum of c_from * c_to
};

template <Scalar T>
std::vector<LagGroup<T>> pair_lag_groups(const SpikeSignal<T>& signal, const Tolerance& tol = {}) {
  struct Term {
    Point<T> lag;
    std::size_t from, to;
  };
  std::vector<Term> terms;
  const auto& spikes = signal.spikes();
  for (std::size_t n = 0; n < spikes.size(); ++n) {
    for (std::size_t m = n + 1; m < spikes.size(); ++m) {
      Point<T> lag = subtract(spikes[m].position, spikes[n].position);
      if (lex_sign(lag, tol) < 0) terms.push_back({negate(std::move(lag)), m, n});
      else terms.push_back({std::move(lag), n, m});
    }
  }
  // Fixed order so floating sums are reproducible.
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (lex_less(a.lag, b.lag)) return true;
    if (lex_less(b.lag, a.lag)) return false;
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  std::vector<LagGroup<T>> groups;
  for (const auto& t : terms) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const LagGroup<T>& g) { return same_point(g.lag, t.lag, tol); });
    if (it == groups.end()) {
      groups.push_back({t.lag, {}, T(0)});
      it = std::prev(groups.end());
    }
    it->pairs.emplace_back(t.from, t.to);
    it->coefficient += spikes[t.from].coefficient * spikes[t.to].coefficient;
  }
  return groups;
}

/// Full centro-symmetric ACF of a delta train; coincident lags are merged
/// by summing their coefficients.
template <Scalar T>
DeltaAcf<T> compute_acf(const SpikeSignal<T>& signal, const Tolerance& tol = {}) {
  T energy(0);
  for (const auto& s : signal.spikes()) energy += s.coefficient * s.coefficient;
  std::vector<Delta<T>> deltas;
  deltas.push_back({Point<T>(signal.dim(), T(0)), energy});
  for (const auto& g : pair_lag_groups(signal, tol)) {
    // Colliding terms that cancel leave no delta behind.
    if (same_coefficient(g.coefficient, T(0), tol)) continue;
    deltas.push_back({g.lag, g.coefficient});
    deltas.push_back({negate(g.lag), g.coefficient});
  }
  return DeltaAcf<T>(signal.dim(), std::move(deltas), false, tol);
}

template <Scalar T>
struct CollisionReport {
  bool has_collisions = false;
  /// Lag groups hit by more than one pair (empty when built from an ACF).
  std::vector<LagGroup<T>> groups;
};

template <Scalar T>
CollisionReport<T> detect_collisions(const SpikeSignal<T>& signal, const Tolerance& tol = {}) {
  CollisionReport<T> report;
  for (auto& g : pair_lag_groups(signal, tol)) {
    if (g.pairs.size() > 1) report.groups.push_back(std::move(g));
  }
  report.has_collisions = !report.groups.empty();
  return report;
}

/// Collision test on a merged ACF given the number of spikes it came from.
template <Scalar T>
CollisionReport<T> detect_collisions(const DeltaAcf<T>& acf, std::size_t claimed_n) {
  const std::size_t expected = claimed_n * claimed_n - claimed_n + 1;
  const std::size_t count = acf.full_size();
  if (claimed_n == 0 || count > expected) {
    throw Error(ErrorKind::InvalidAcf, "ACF holds " + std::to_string(count) +
                                           " deltas, more than possible for N = " +
                                           std::to_string(claimed_n));
  }
  CollisionReport<T> report;
  report.has_collisions = count < expected;
  return report;
}

/// N such that N^2 - N + 1 equals the full delta count, if one exists.
inline std::optional<std::size_t> implied_spike_count(std::size_t full_delta_count) {
  for (std::size_t n = 1; n * n - n + 1 <= full_delta_count; ++n) {
    if (n * n - n + 1 == full_delta_count) return n;
  }
  return std::nullopt;
}

template <Scalar T>
DeltaAcf<T> half_support(const DeltaAcf<T>& acf, const Tolerance& tol = {}) {
  if (acf.half()) return acf;
  std::vector<Delta<T>> kept;
  for (const auto& d : acf.deltas()) {
    if (lex_sign(d.lag, tol) >= 0) kept.push_back(d);
  }
  return DeltaAcf<T>(acf.dim(), std::move(kept), true, tol);
}

template <Scalar T>
DeltaAcf<T> expand_full(const DeltaAcf<T>& acf, const Tolerance& tol = {}) {
  if (!acf.half()) return acf;
  std::vector<Delta<T>> all;
  for (const auto& d : acf.deltas()) {
    all.push_back(d);
    if (lex_sign(d.lag, tol) != 0) all.push_back({negate(d.lag), d.coefficient});
  }
  return DeltaAcf<T>(acf.dim(), std::move(all), false, tol);
}

/// Positive lags of a 1-D ACF, ascending.
template <Scalar T>
std::vector<T> positive_lags_1d(const DeltaAcf<T>& acf, const Tolerance& tol = {}) {
  if (acf.dim() != 1) throw Error(ErrorKind::InvalidAcf, "expected a 1-D ACF");
  std::vector<T> out;
  for (const auto& d : acf.deltas()) {
    if (position_sign(d.lag[0], tol) > 0) out.push_back(d.lag[0]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Sorted multiset of positive pairwise differences of 1-D positions.
template <Scalar T>
std::vector<T> difference_multiset(const std::vector<T>& positions) {
  std::vector<T> diffs;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      diffs.push_back(abs_value(T(positions[j] - positions[i])));
    }
  }
  std::sort(diffs.begin(), diffs.end());
  return diffs;
}

/// Multiset equality of two ACFs (full form, tolerance-aware).
template <Scalar T>
bool acf_equal(const DeltaAcf<T>& a, const DeltaAcf<T>& b, const Tolerance& tol = {}) {
  if (a.dim() != b.dim()) return false;
  const auto fa = expand_full(a, tol);
  const auto fb = expand_full(b, tol);
  if (fa.size() != fb.size()) return false;
  std::vector<bool> used(fb.size(), false);
  for (const auto& d : fa.deltas()) {
    bool matched = false;
    for (std::size_t j = 0; j < fb.size(); ++j) {
      const auto& e = fb.deltas()[j];
      if (!used[j] && same_point(d.lag, e.lag, tol) && same_coefficient(d.coefficient, e.coefficient, tol)) {
        used[j] = matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Equivalence classes: f ~ g iff f(x) = +/- g(k +/- x).

namespace detail {

template <Scalar T>
std::vector<Spike<T>> normalized_pose(const SpikeSignal<T>& signal, bool reflect, bool flip_sign,
                                      const Tolerance& tol) {
  std::vector<Spike<T>> spikes = signal.spikes();
  for (auto& s : spikes) {
    if (reflect) s.position = negate(std::move(s.position));
    if (flip_sign) s.coefficient = -s.coefficient;
  }
  tolerant_sort(spikes, [&](const Spike<T>& a, const Spike<T>& b) {
    return compare_points(a.position, b.position, tol);
  });
  const Point<T> origin = spikes.front().position;
  for (auto& s : spikes) s.position = subtract(s.position, origin);
  return spikes;
}

template <Scalar T>
int compare_spike_lists(const std::vector<Spike<T>>& a, const std::vector<Spike<T>>& b,
                        const Tolerance& tol) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (int c = compare_points(a[i].position, b[i].position, tol); c != 0) return c;
    if (int c = compare_coefficient(a[i].coefficient, b[i].coefficient, tol); c != 0) return c;
  }
  return 0;
}

inline constexpr std::array<std::pair<bool, bool>, 4> kPoses{
    {{false, false}, {false, true}, {true, false}, {true, true}}};

}  // namespace detail

/// Canonical representative of a signal's equivalence class.
template <Scalar T>
struct EquivalenceClass {
  SpikeSignal<T> representative;
};

/// Translates the lexicographic minimum to the origin and picks, among
/// point reflection x -> -x and global sign flip, the lexicographically
/// smallest spike list.
template <Scalar T>
EquivalenceClass<T> canonicalize(const SpikeSignal<T>& signal, const Tolerance& tol = {}) {
  std::optional<std::vector<Spike<T>>> best;
  for (auto [reflect, flip] : detail::kPoses) {
    auto pose = detail::normalized_pose(signal, reflect, flip, tol);
    if (!best || detail::compare_spike_lists(pose, *best, tol) < 0) best = std::move(pose);
  }
  return {SpikeSignal<T>(signal.dim(), std::move(*best), tol)};
}

/// Tolerance-robust class comparison: true iff some pose of g matches f.
template <Scalar T>
bool same_class(const SpikeSignal<T>& f, const SpikeSignal<T>& g, const Tolerance& tol = {}) {
  if (f.dim() != g.dim() || f.size() != g.size()) return false;
  const auto base = detail::normalized_pose(f, false, false, tol);
  for (auto [reflect, flip] : detail::kPoses) {
    if (detail::compare_spike_lists(base, detail::normalized_pose(g, reflect, flip, tol), tol) == 0) {
      return true;
    }
  }
  return false;
}

template <Scalar T>
bool same_class(const EquivalenceClass<T>& a, const EquivalenceClass<T>& b, const Tolerance& tol = {}) {
  return same_class(a.representative, b.representative, tol);
}

/// Canonical total order on classes, for deterministic output lists.
template <Scalar T>
bool class_less(const EquivalenceClass<T>& a, const EquivalenceClass<T>& b, const Tolerance& tol = {}) {
  return detail::compare_spike_lists(a.representative.spikes(), b.representative.spikes(), tol) < 0;
}

/// Deduplicates (by same_class) and sorts canonically.
template <Scalar T>
std::vector<EquivalenceClass<T>> unique_classes(std::vector<EquivalenceClass<T>> classes,
                                                const Tolerance& tol = {}) {
  std::vector<EquivalenceClass<T>> out;
  for (auto& c : classes) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const EquivalenceClass<T>& o) { return same_class(o, c, tol); });
    if (!seen) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [&](const EquivalenceClass<T>& a, const EquivalenceClass<T>& b) { return class_less(a, b, tol); });
  return out;
}

/// Applies f(x) -> sign * f(shift + reflect * x).
template <Scalar T>
SpikeSignal<T> transform_pose(const SpikeSignal<T>& signal, const Point<T>& shift, bool reflect,
                              bool flip_sign, const Tolerance& tol = {}) {
  std::vector<Spike<T>> spikes = signal.spikes();
  for (auto& s : spikes) {
    for (std::size_t i = 0; i < s.position.size(); ++i) {
      s.position[i] = (reflect ? T(-s.position[i]) : s.position[i]) + shift[i];
    }
    if (flip_sign) s.coefficient = -s.coefficient;
  }
  return SpikeSignal<T>(signal.dim(), std::move(spikes), tol);
}

}  // namespace sparsepr
