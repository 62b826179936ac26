#pragma once

// Coefficient recovery once the support is known: rank-one completion of
// the outer-product matrix, and the log-linear consistency test that tells
// the two supports of a six-point homometric pair apart.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "sparsepr/core.hpp"
#include "sparsepr/error.hpp"
#include "sparsepr/linalg.hpp"
#include "sparsepr/scalar.hpp"
#include "sparsepr/turnpike.hpp"
#include "sparsepr/types.hpp"
#include "sparsepr/verdict.hpp"

namespace sparsepr {

namespace detail {

/// The unique ACF delta whose lag matches `lag`; InconsistentAcf if none
/// or more than one does.
template <Scalar T>
const Delta<T>& match_lag(const DeltaAcf<T>& full, const Point<T>& lag, const Tolerance& tol) {
  const Delta<T>* hit = nullptr;
  for (const auto& d : full.deltas()) {
    if (!same_point(d.lag, lag, tol)) continue;
    if (hit) throw Error(ErrorKind::InconsistentAcf, "support difference matches more than one ACF lag");
    hit = &d;
  }
  if (!hit) throw Error(ErrorKind::InconsistentAcf, "support difference missing from the ACF");
  return *hit;
}

template <Scalar T>
void fix_global_sign(std::vector<T>& c) {
  auto first = std::find_if(c.begin(), c.end(), [](const T& v) { return !is_zero(v); });
  if (first != c.end() && *first < T(0)) {
    for (T& v : c) v = -v;
  }
}

}  // namespace detail

/// Off-diagonal products c_n c_m read off the ACF for a known support.
template <Scalar T>
linalg::Matrix<T> off_diagonal_products(const std::vector<Point<T>>& support, const DeltaAcf<T>& acf,
                                        const Tolerance& tol = {}) {
  const auto full = expand_full(acf, tol);
  const std::size_t n = support.size();
  auto a = linalg::zeros<T>(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const T v = detail::match_lag(full, subtract(support[j], support[i]), tol).coefficient;
      a[i][j] = v;
      a[j][i] = v;
    }
  }
  return a;
}

/// A symmetric matrix known off the diagonal, completed to rank one.
template <Scalar T>
struct RankOneCompletion {
  std::size_t n = 0;
  linalg::Matrix<T> known;      // zero diagonal, entries c_k c_m
  std::vector<T> alpha;         // recovered |c_k|^2
  linalg::Matrix<T> completed;  // known + diag(alpha)
};

/// |c_k|^2 = ((N-2)/(1-N)) / (A^-1)_kk, from a single inversion of A.
template <Scalar T>
RankOneCompletion<T> complete_rank_one(const linalg::Matrix<T>& known, const Tolerance& tol = {}) {
  const std::size_t n = known.size();
  if (n <= 2) throw Error(ErrorKind::UseDirectFormula, "rank-one completion needs N > 2");
  auto inv = linalg::inverse(known);
  if (!inv) throw Error(ErrorKind::SingularSystem, "off-diagonal matrix is singular");
  const T factor = T(static_cast<long long>(n) - 2) / T(1 - static_cast<long long>(n));
  RankOneCompletion<T> out{n, known, {}, known};
  for (std::size_t k = 0; k < n; ++k) {
    const T& d = (*inv)[k][k];
    if (is_zero(d)) throw Error(ErrorKind::InconsistentAcf, "vanishing diagonal of the inverse");
    const T alpha = factor / d;
    if (!(alpha > T(0)) || same_coefficient(alpha, T(0), tol)) {
      throw Error(ErrorKind::InconsistentAcf, "recovered |c_k|^2 is not positive");
    }
    out.alpha.push_back(alpha);
    out.completed[k][k] = alpha;
  }
  return out;
}

/// Coefficients (up to global sign, first one made positive) of a signal
/// with the given support and ACF.
template <Scalar T>
std::vector<T> recover_coefficients(const std::vector<Point<T>>& support, const DeltaAcf<T>& acf,
                                    const Tolerance& tol = {}) {
  const std::size_t n = support.size();
  if (n == 0) throw Error(ErrorKind::InvalidSignal, "empty support");
  if (acf.dim() != support.front().size()) throw Error(ErrorKind::InvalidAcf, "dimension mismatch");
  const T d0 = acf.zero_lag_coefficient();

  if (n == 1) return {sqrt_value(d0)};

  if (n == 2) {
    // c1 c2 = d1 and c1^2 + c2^2 = d0.
    const T d1 = off_diagonal_products(support, acf, tol)[0][1];
    T plus = d0 + T(2) * d1;
    T minus = d0 - T(2) * d1;
    for (T* v : {&plus, &minus}) {
      if (*v < T(0) && same_coefficient(*v, T(0), tol)) *v = T(0);
      if (*v < T(0)) throw Error(ErrorKind::InconsistentAcf, "zero lag too small for the cross term");
    }
    const T sp = sqrt_value(plus);
    const T sm = sqrt_value(minus);
    std::vector<T> c{T((sp + sm) / 2), T((sp - sm) / 2)};
    if (same_coefficient(c[1], T(0), tol)) throw Error(ErrorKind::InconsistentAcf, "second coefficient vanishes");
    detail::fix_global_sign(c);
    return c;
  }

  const auto completion = complete_rank_one(off_diagonal_products(support, acf, tol), tol);
  T trace(0);
  for (const T& a : completion.alpha) trace += a;
  if (!same_coefficient(trace, d0, tol)) {
    throw Error(ErrorKind::InconsistentAcf, "sum of |c_k|^2 disagrees with the zero lag");
  }

  std::vector<T> c(n);
  if constexpr (is_exact_v<T>) {
    const auto top = static_cast<std::size_t>(
        std::max_element(completion.alpha.begin(), completion.alpha.end()) - completion.alpha.begin());
    const T root = sqrt_value(completion.alpha[top]);
    for (std::size_t k = 0; k < n; ++k) c[k] = completion.completed[k][top] / root;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (c[i] * c[j] != completion.completed[i][j]) {
          throw Error(ErrorKind::InconsistentAcf, "completed matrix is not rank one");
        }
      }
    }
  } else {
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = completion.completed[i][j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const auto& values = eig.eigenvalues();  // ascending
    const double top = values(n - 1);
    double second = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) second = std::max(second, std::abs(values(k)));
    if (top <= 0 || second > std::max(tol.coefficient, 1e-12) * trace) {
      throw Error(ErrorKind::InconsistentAcf, "completed matrix is not rank one");
    }
    const Eigen::VectorXd v = eig.eigenvectors().col(n - 1) * std::sqrt(top);
    for (std::size_t k = 0; k < n; ++k) c[k] = v(k);
  }
  detail::fix_global_sign(c);
  return c;
}

template <Scalar T>
std::vector<T> recover_coefficients(const std::vector<T>& support_1d, const DeltaAcf<T>& acf,
                                    const Tolerance& tol = {}) {
  std::vector<Point<T>> pts;
  for (const T& x : support_1d) pts.push_back(Point<T>{x});
  return recover_coefficients(pts, acf, tol);
}

// ---------------------------------------------------------------------------
// Log-linear systems q = C r, one row per positive lag.

template <Scalar T>
struct LogLinearSystem {
  std::size_t unknowns = 0;
  std::vector<std::pair<std::size_t, std::size_t>> rows;  // support indices producing each lag
  std::vector<T> data;                                     // signed ACF coefficient per row
  std::vector<double> q;                                   // log |data|

  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(unknowns));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(rows[r].first)) = 1.0;
      c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(rows[r].second)) = 1.0;
    }
    return c;
  }
};

/// Builds the system for a 1-D support against a collision-free ACF. Every
/// positive lag must be produced by exactly one support pair.
template <Scalar T>
LogLinearSystem<T> build_log_linear_system(const std::vector<T>& support, const DeltaAcf<T>& acf,
                                           const Tolerance& tol = {}) {
  const auto lags = positive_lags_1d(acf, tol);
  const std::size_t n = support.size();
  if (lags.size() != n * (n - 1) / 2) {
    throw Error(ErrorKind::InconsistentAcf, "ACF has collisions or does not match the support size");
  }
  const auto full = expand_full(acf, tol);
  LogLinearSystem<T> sys;
  sys.unknowns = n;
  for (const T& lag : lags) {
    std::optional<std::pair<std::size_t, std::size_t>> pair;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!same_position(abs_value(T(support[j] - support[i])), lag, tol)) continue;
        if (pair) throw Error(ErrorKind::InconsistentAcf, "support has a collision");
        pair = std::pair(i, j);
      }
    }
    if (!pair) throw Error(ErrorKind::InconsistentAcf, "ACF lag not produced by the support");
    const T d = detail::match_lag(full, Point<T>{lag}, tol).coefficient;
    if (is_zero(d)) throw Error(ErrorKind::InconsistentAcf, "zero ACF coefficient");
    sys.rows.push_back(*pair);
    sys.data.push_back(d);
    sys.q.push_back(std::log(std::abs(to_double(d))));
  }
  return sys;
}

template <Scalar T>
struct SupportConsistency {
  bool consistent = false;
  double residual = 0;            // least-squares residual (floating); 0 or 1 (exact)
  std::vector<T> coefficients;    // signed, first positive; empty when inconsistent
};

/// Least-squares consistency of q = C r (exact mode uses the equivalent
/// multiplicative identity |c_n|^2 = |d_nm||d_nk|/|d_mk| for every triple),
/// followed by sign restoration from the signed ACF entries.
template <Scalar T>
SupportConsistency<T> check_support_consistency(const LogLinearSystem<T>& sys, const Tolerance& tol = {}) {
  const std::size_t n = sys.unknowns;
  SupportConsistency<T> out;
  std::vector<T> magnitude(n);

  if constexpr (is_exact_v<T>) {
    // |d| for every unordered pair.
    auto table = linalg::zeros<T>(n, n);
    for (std::size_t r = 0; r < sys.rows.size(); ++r) {
      const auto [i, j] = sys.rows[r];
      table[i][j] = table[j][i] = abs_value(sys.data[r]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::optional<T> alpha;
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          if (j == i || k == i) continue;
          const T candidate = table[i][j] * table[i][k] / table[j][k];
          if (alpha && *alpha != candidate) {
            out.residual = 1;
            return out;
          }
          alpha = candidate;
        }
      }
      if (!alpha) throw Error(ErrorKind::UseDirectFormula, "consistency test needs N > 2");
      magnitude[i] = sqrt_value(*alpha);
    }
  } else {
    const Eigen::MatrixXd c = sys.matrix();
    Eigen::VectorXd q(static_cast<Eigen::Index>(sys.q.size()));
    for (std::size_t r = 0; r < sys.q.size(); ++r) q(static_cast<Eigen::Index>(r)) = sys.q[r];
    const Eigen::VectorXd r = c.colPivHouseholderQr().solve(q);
    out.residual = (c * r - q).norm();
    if (out.residual > tol.coefficient * std::max(1.0, q.norm())) return out;
    for (std::size_t i = 0; i < n; ++i) magnitude[i] = std::exp(r(static_cast<Eigen::Index>(i)));
  }

  // Signs: s_i s_j = sign(d_ij); anchor s_0 = +1 and check every pair.
  std::vector<int> sign(n, 0);
  sign[0] = 1;
  auto data_sign = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < sys.rows.size(); ++r) {
      const auto [a, b] = sys.rows[r];
      if ((a == i && b == j) || (a == j && b == i)) return sys.data[r] < T(0) ? -1 : 1;
    }
    return 0;
  };
  for (std::size_t j = 1; j < n; ++j) sign[j] = data_sign(0, j);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sign[i] * sign[j] != data_sign(i, j)) {
        out.residual = std::max(out.residual, 1.0);
        return out;
      }
    }
  }
  out.consistent = true;
  for (std::size_t i = 0; i < n; ++i) out.coefficients.push_back(sign[i] < 0 ? T(-magnitude[i]) : magnitude[i]);
  detail::fix_global_sign(out.coefficients);
  return out;
}

template <Scalar T>
struct Disambiguation {
  enum class Kind { OnlyX, OnlyY, Both };
  Kind kind;
  std::vector<T> x_coefficients;  // empty unless X is consistent
  std::vector<T> y_coefficients;  // empty unless Y is consistent
};

/// Decides which of two homometric supports can carry the measured ACF
/// coefficients.
template <Scalar T>
Disambiguation<T> disambiguate_supports(const std::vector<T>& x, const std::vector<T>& y, const DeltaAcf<T>& acf,
                                        const Tolerance& tol = {}) {
  const auto cx = check_support_consistency(build_log_linear_system(x, acf, tol), tol);
  const auto cy = check_support_consistency(build_log_linear_system(y, acf, tol), tol);
  using Kind = typename Disambiguation<T>::Kind;
  if (cx.consistent && cy.consistent) return {Kind::Both, cx.coefficients, cy.coefficients};
  if (cx.consistent) return {Kind::OnlyX, cx.coefficients, {}};
  if (cy.consistent) return {Kind::OnlyY, {}, cy.coefficients};
  throw Error(ErrorKind::InconsistentAcf, "ACF coefficients fit neither support");
}

/// dim(span C_X  intersect  span C_Y) = rank C_X + rank C_Y - rank [C_X, C_Y].
template <Scalar T>
int log_system_intersection_dimension(const LogLinearSystem<T>& x, const LogLinearSystem<T>& y,
                                      double threshold = 1e-8) {
  const Eigen::MatrixXd cx = x.matrix();
  const Eigen::MatrixXd cy = y.matrix();
  Eigen::MatrixXd both(cx.rows(), cx.cols() + cy.cols());
  both << cx, cy;
  auto rank_of = [&](const Eigen::MatrixXd& m) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(threshold);
    return static_cast<int>(lu.rank());
  };
  return rank_of(cx) + rank_of(cy) - rank_of(both);
}

// ---------------------------------------------------------------------------

/// Uniqueness of 1-D sparse phase retrieval from an ACF, with recovery.
template <Scalar T>
UniquenessVerdict<T> classify_uniqueness_1d(const DeltaAcf<T>& acf, const Tolerance& tol = {}) {
  using Verdict = UniquenessVerdict<T>;
  if (acf.dim() != 1) throw Error(ErrorKind::InvalidAcf, "expected a 1-D ACF");
  const auto full = expand_full(acf, tol);
  const auto lags = positive_lags_1d(full, tol);

  if (lags.empty()) {
    return Verdict::unique(make_signal_1d(std::vector<T>{T(0)}, {sqrt_value(full.zero_lag_coefficient())}, tol));
  }
  if (!points_for_difference_count(lags.size())) return Verdict::not_covered("collisions");

  const DifferenceMultiset<T> diffs(lags, tol);
  const auto support = support_uniqueness(diffs, tol);
  using Kind = typename SupportVerdict<T>::Kind;
  auto with_coefficients = [&](const std::vector<T>& pos, const std::vector<T>& coefs) {
    return canonicalize(make_signal_1d(pos, coefs, tol), tol).representative;
  };

  try {
    switch (support.kind) {
      case Kind::HasCollisions: return Verdict::not_covered("collisions");
      case Kind::NoSupport: return Verdict::not_covered("no_support");
      case Kind::UniqueSupport: {
        const auto pos = support.supports[0].representative.positions_1d();
        return Verdict::unique(with_coefficients(pos, recover_coefficients(pos, full, tol)));
      }
      case Kind::TwoSupports: {
        const auto xs = support.supports[0].representative.positions_1d();
        const auto ys = support.supports[1].representative.positions_1d();
        const auto d = disambiguate_supports(xs, ys, full, tol);
        using DKind = typename Disambiguation<T>::Kind;
        if (d.kind == DKind::OnlyX) return Verdict::unique(with_coefficients(xs, d.x_coefficients));
        if (d.kind == DKind::OnlyY) return Verdict::unique(with_coefficients(ys, d.y_coefficients));
        return Verdict::ambiguous({with_coefficients(xs, d.x_coefficients), with_coefficients(ys, d.y_coefficients)});
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InconsistentAcf || e.kind() == ErrorKind::SingularSystem) {
      return Verdict::not_covered("inconsistent_coefficients");
    }
    throw;
  }
  return Verdict::not_covered("unreachable");
}

}  // namespace sparsepr
