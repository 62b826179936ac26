#pragma once

// Projections of D-dimensional delta trains onto 1-D subspaces, and the
// visibility (general position) checker for multi-dimensional ACFs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "sparsepr/core.hpp"
#include "sparsepr/error.hpp"
#include "sparsepr/scalar.hpp"
#include "sparsepr/types.hpp"

namespace sparsepr {

/// A 1xD projection vector. Unit Euclidean norm in floating mode; a
/// primitive integer vector in exact mode.
template <Scalar T>
class ProjectionDirection {
 public:
  explicit ProjectionDirection(std::vector<T> components) : p_(std::move(components)) {
    if (p_.empty()) throw Error(ErrorKind::InvalidSignal, "empty projection direction");
    if constexpr (is_exact_v<T>) {
      BigInt g = 0;
      for (const T& v : p_) {
        if (boost::multiprecision::denominator(v) != 1) {
          throw Error(ErrorKind::InvalidSignal, "exact directions must have integer components");
        }
        g = boost::multiprecision::gcd(g, BigInt(boost::multiprecision::numerator(v)));
      }
      if (g != 1) throw Error(ErrorKind::InvalidSignal, "exact directions must be primitive");
    } else {
      double norm = 0;
      for (double v : p_) norm += v * v;
      if (std::abs(std::sqrt(norm) - 1.0) > 1e-12) {
        throw Error(ErrorKind::InvalidSignal, "floating directions must have unit norm");
      }
    }
  }

  /// Normalizes (floating) or divides by the gcd (exact).
  static ProjectionDirection from_raw(std::vector<T> raw) {
    if constexpr (is_exact_v<T>) {
      BigInt g = 0;
      for (const T& v : raw) {
        if (boost::multiprecision::denominator(v) != 1) {
          throw Error(ErrorKind::InvalidSignal, "exact directions must have integer components");
        }
        g = boost::multiprecision::gcd(g, BigInt(boost::multiprecision::numerator(v)));
      }
      if (g == 0) throw Error(ErrorKind::InvalidSignal, "zero projection direction");
      for (T& v : raw) v /= Rational(g);
    } else {
      double norm = 0;
      for (double v : raw) norm += v * v;
      norm = std::sqrt(norm);
      if (norm == 0) throw Error(ErrorKind::InvalidSignal, "zero projection direction");
      for (double& v : raw) v /= norm;
    }
    return ProjectionDirection(std::move(raw));
  }

  std::size_t dim() const noexcept { return p_.size(); }
  const std::vector<T>& components() const noexcept { return p_; }

  T apply(const Point<T>& x) const {
    if (x.size() != p_.size()) throw Error(ErrorKind::InvalidSignal, "direction/point dimension mismatch");
    T acc(0);
    for (std::size_t i = 0; i < p_.size(); ++i) acc += p_[i] * x[i];
    return acc;
  }

 private:
  std::vector<T> p_;
};

/// f projected onto P: positions <P, x>, coincident projections merged by
/// summing coefficients (cancelled spikes are dropped).
template <Scalar T>
SpikeSignal<T> project_signal(const SpikeSignal<T>& signal, const ProjectionDirection<T>& direction,
                              const Tolerance& tol = {}) {
  if (signal.dim() != direction.dim()) throw Error(ErrorKind::InvalidSignal, "dimension mismatch");
  std::vector<Spike<T>> merged;
  for (const auto& s : signal.spikes()) {
    const T w = direction.apply(s.position);
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Spike<T>& m) { return same_position(m.position[0], w, tol); });
    if (it == merged.end()) merged.push_back({Point<T>{w}, s.coefficient});
    else it->coefficient += s.coefficient;
  }
  std::erase_if(merged, [&](const Spike<T>& s) { return same_coefficient(s.coefficient, T(0), tol); });
  if (merged.empty()) throw Error(ErrorKind::InvalidSignal, "projection cancels every spike");
  return SpikeSignal<T>(1, std::move(merged), tol);
}

/// ACF projected onto P: lags <P, y>, coincident lags merged.
template <Scalar T>
DeltaAcf<T> project_acf(const DeltaAcf<T>& acf, const ProjectionDirection<T>& direction,
                        const Tolerance& tol = {}) {
  if (acf.dim() != direction.dim()) throw Error(ErrorKind::InvalidAcf, "dimension mismatch");
  const auto full = expand_full(acf, tol);
  std::vector<Delta<T>> merged;
  for (const auto& d : full.deltas()) {
    const T w = direction.apply(d.lag);
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Delta<T>& m) { return same_position(m.lag[0], w, tol); });
    if (it == merged.end()) merged.push_back({Point<T>{w}, d.coefficient});
    else it->coefficient += d.coefficient;
  }
  // Snap the zero-lag representative and symmetrize mirrored lags exactly.
  for (auto& m : merged) {
    if (position_sign(m.lag[0], tol) == 0) m.lag[0] = T(0);
  }
  std::vector<Delta<T>> out;
  for (const auto& m : merged) {
    const int s = position_sign(m.lag[0], tol);
    if (s == 0) out.push_back(m);
    else if (s > 0) {
      out.push_back(m);
      out.push_back({Point<T>{T(-m.lag[0])}, m.coefficient});
    }
  }
  std::erase_if(out, [&](const Delta<T>& d) {
    return position_sign(d.lag[0], tol) != 0 && same_coefficient(d.coefficient, T(0), tol);
  });
  return DeltaAcf<T>(1, std::move(out), false, tol);
}

template <Scalar T>
struct VisibilityEntry {
  Point<T> lag;
  bool visible;
};

template <Scalar T>
struct VisibilityReport {
  std::vector<VisibilityEntry<T>> entries;  // nonzero lags only
  bool all_visible = true;
};

namespace detail {

template <Scalar T>
bool collinear(const Point<T>& a, const Point<T>& b, const Tolerance& tol) {
  double scale = 1.0;
  if constexpr (!is_exact_v<T>) {
    double na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    scale = std::max(1.0, std::sqrt(na * nb));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const T minor = a[i] * b[j] - a[j] * b[i];
      if constexpr (is_exact_v<T>) {
        if (minor != 0) return false;
      } else {
        if (std::abs(minor) > tol.position * scale) return false;
      }
    }
  }
  return true;
}

}  // namespace detail

/// A delta at y is visible iff no other delta besides -y lies on the line
/// through the origin and y. All visible means the ACF is in general position.
template <Scalar T>
VisibilityReport<T> check_general_position(const DeltaAcf<T>& acf, const Tolerance& tol = {}) {
  const auto full = expand_full(acf, tol);
  std::vector<Point<T>> lags;
  for (const auto& d : full.deltas()) {
    if (!is_origin(d.lag, tol)) lags.push_back(d.lag);
  }
  VisibilityReport<T> report;
  for (const auto& y : lags) {
    const Point<T> mirror = negate(y);
    bool visible = true;
    for (const auto& z : lags) {
      if (same_point(z, y, tol) || same_point(z, mirror, tol)) continue;
      if (detail::collinear(y, z, tol)) {
        visible = false;
        break;
      }
    }
    report.entries.push_back({y, visible});
    report.all_visible = report.all_visible && visible;
  }
  return report;
}

}  // namespace sparsepr
