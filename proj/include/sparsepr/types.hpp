#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sparsepr/error.hpp"
#include "sparsepr/scalar.hpp"

namespace sparsepr {

/// A D-dimensional location or lag.
template <Scalar T>
using Point = std::vector<T>;

/// Strict lexicographic order on points. Used for sorting only; matching
/// goes through the tolerance-aware helpers below.
template <Scalar T>
bool lex_less(const Point<T>& a, const Point<T>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

template <Scalar T>
int compare_points(const Point<T>& a, const Point<T>& b, const Tolerance& tol) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (int c = compare_position(a[i], b[i], tol); c != 0) return c;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

/// Stable insertion sort under a tolerance-aware three-way comparison.
/// Inputs are small; std::sort would need a strict weak order.
template <class Item, class Compare>
void tolerant_sort(std::vector<Item>& items, Compare three_way) {
  for (std::size_t i = 1; i < items.size(); ++i) {
    for (std::size_t j = i; j > 0 && three_way(items[j], items[j - 1]) < 0; --j) {
      std::swap(items[j], items[j - 1]);
    }
  }
}

template <Scalar T>
bool same_point(const Point<T>& a, const Point<T>& b, const Tolerance& tol) {
  return compare_points(a, b, tol) == 0;
}

template <Scalar T>
bool is_origin(const Point<T>& p, const Tolerance& tol) {
  return std::all_of(p.begin(), p.end(), [&](const T& v) { return position_sign(v, tol) == 0; });
}

/// Sign of the first component that is not zero within tolerance.
template <Scalar T>
int lex_sign(const Point<T>& p, const Tolerance& tol) {
  for (const T& v : p) {
    if (int s = position_sign(v, tol); s != 0) return s;
  }
  return 0;
}

template <Scalar T>
Point<T> negate(Point<T> p) {
  for (T& v : p) v = -v;
  return p;
}

template <Scalar T>
Point<T> subtract(const Point<T>& a, const Point<T>& b) {
  Point<T> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

template <Scalar T>
struct Spike {
  Point<T> position;
  T coefficient;
};

/// A finite weighted delta train in D dimensions. Immutable once built.
template <Scalar T>
class SpikeSignal {
 public:
  SpikeSignal(std::size_t dim, std::vector<Spike<T>> spikes, const Tolerance& tol = {})
      : dim_(dim), spikes_(std::move(spikes)) {
    if (dim_ == 0) throw Error(ErrorKind::InvalidSignal, "dimension must be positive");
    if (spikes_.empty()) throw Error(ErrorKind::InvalidSignal, "signal needs at least one spike");
    for (const auto& s : spikes_) {
      if (s.position.size() != dim_) {
        throw Error(ErrorKind::InvalidSignal, "spike position has wrong dimension");
      }
      if (is_zero(s.coefficient)) throw Error(ErrorKind::InvalidSignal, "zero coefficient");
    }
    for (std::size_t i = 0; i < spikes_.size(); ++i) {
      for (std::size_t j = i + 1; j < spikes_.size(); ++j) {
        if (same_point(spikes_[i].position, spikes_[j].position, tol)) {
          throw Error(ErrorKind::InvalidSignal, "two spikes share a location");
        }
      }
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return spikes_.size(); }
  const std::vector<Spike<T>>& spikes() const noexcept { return spikes_; }
  const Spike<T>& operator[](std::size_t i) const { return spikes_[i]; }

  std::vector<Point<T>> positions() const {
    std::vector<Point<T>> out;
    out.reserve(spikes_.size());
    for (const auto& s : spikes_) out.push_back(s.position);
    return out;
  }

  std::vector<T> coefficients() const {
    std::vector<T> out;
    out.reserve(spikes_.size());
    for (const auto& s : spikes_) out.push_back(s.coefficient);
    return out;
  }

  /// 1-D positions; only meaningful when dim() == 1.
  std::vector<T> positions_1d() const {
    std::vector<T> out;
    out.reserve(spikes_.size());
    for (const auto& s : spikes_) out.push_back(s.position[0]);
    return out;
  }

 private:
  std::size_t dim_;
  std::vector<Spike<T>> spikes_;
};

template <Scalar T>
SpikeSignal<T> make_signal_1d(const std::vector<T>& positions, const std::vector<T>& coefficients,
                              const Tolerance& tol = {}) {
  if (positions.size() != coefficients.size()) {
    throw Error(ErrorKind::InvalidSignal, "positions and coefficients differ in length");
  }
  std::vector<Spike<T>> spikes;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    spikes.push_back({Point<T>{positions[i]}, coefficients[i]});
  }
  return SpikeSignal<T>(1, std::move(spikes), tol);
}

template <Scalar T>
SpikeSignal<T> make_support_1d(const std::vector<T>& positions, const Tolerance& tol = {}) {
  return make_signal_1d(positions, std::vector<T>(positions.size(), T(1)), tol);
}

template <Scalar T>
struct Delta {
  Point<T> lag;
  T coefficient;
};

/// A centro-symmetric weighted delta train (the measured autocorrelation).
///
/// Deltas are kept sorted lexicographically by lag. The zero lag is stored
/// explicitly. In half form only the zero lag and the lexicographically
/// positive member of each +/- pair are kept.
template <Scalar T>
class DeltaAcf {
 public:
  DeltaAcf(std::size_t dim, std::vector<Delta<T>> deltas, bool half = false,
           const Tolerance& tol = {})
      : dim_(dim), deltas_(std::move(deltas)), half_(half) {
    if (dim_ == 0) throw Error(ErrorKind::InvalidAcf, "dimension must be positive");
    std::size_t zeros = 0;
    for (const auto& d : deltas_) {
      if (d.lag.size() != dim_) throw Error(ErrorKind::InvalidAcf, "lag has wrong dimension");
      if (is_origin(d.lag, tol)) ++zeros;
      else if (half_ && lex_sign(d.lag, tol) < 0) {
        throw Error(ErrorKind::InvalidAcf, "half-form ACF holds a negative lag");
      }
    }
    if (zeros != 1) throw Error(ErrorKind::InvalidAcf, "ACF must contain the zero lag exactly once");
    std::sort(deltas_.begin(), deltas_.end(),
              [](const Delta<T>& a, const Delta<T>& b) { return lex_less(a.lag, b.lag); });
    for (std::size_t i = 0; i < deltas_.size(); ++i) {
      for (std::size_t j = i + 1; j < deltas_.size(); ++j) {
        if (same_point(deltas_[i].lag, deltas_[j].lag, tol)) {
          throw Error(ErrorKind::InvalidAcf, "duplicate lag");
        }
      }
    }
    if (!half_) {
      for (const auto& d : deltas_) {
        const Point<T> mirror = negate(d.lag);
        const bool found = std::any_of(deltas_.begin(), deltas_.end(), [&](const Delta<T>& e) {
          return same_point(e.lag, mirror, tol) && same_coefficient(e.coefficient, d.coefficient, tol);
        });
        if (!found) throw Error(ErrorKind::InvalidAcf, "ACF is not centro-symmetric");
      }
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  bool half() const noexcept { return half_; }
  std::size_t size() const noexcept { return deltas_.size(); }
  const std::vector<Delta<T>>& deltas() const noexcept { return deltas_; }

  const T& zero_lag_coefficient() const {
    for (const auto& d : deltas_) {
      if (std::all_of(d.lag.begin(), d.lag.end(), [](const T& v) { return v == T(0); })) {
        return d.coefficient;
      }
    }
    // Floating lags within tolerance of zero: pick the closest.
    const Delta<T>* best = &deltas_.front();
    double best_norm = -1;
    for (const auto& d : deltas_) {
      double n = 0;
      for (const T& v : d.lag) n += to_double(v) * to_double(v);
      if (best_norm < 0 || n < best_norm) {
        best_norm = n;
        best = &d;
      }
    }
    return best->coefficient;
  }

  /// Number of deltas the full centro-symmetric form holds.
  std::size_t full_size() const noexcept { return half_ ? 2 * deltas_.size() - 1 : deltas_.size(); }

 private:
  std::size_t dim_;
  std::vector<Delta<T>> deltas_;
  bool half_;
};

}  // namespace sparsepr
