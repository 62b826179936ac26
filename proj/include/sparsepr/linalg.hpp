#pragma once

// Small dense linear algebra over either scalar type. Exact mode pivots on
// the first nonzero entry; floating mode uses partial pivoting.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "sparsepr/scalar.hpp"

namespace sparsepr::linalg {

template <Scalar T>
using Matrix = std::vector<std::vector<T>>;

template <Scalar T>
Matrix<T> zeros(std::size_t rows, std::size_t cols) {
  return Matrix<T>(rows, std::vector<T>(cols, T(0)));
}

namespace detail {

template <Scalar T>
std::optional<std::size_t> pick_pivot(const Matrix<T>& m, std::size_t col, std::size_t from, double threshold) {
  std::optional<std::size_t> best;
  for (std::size_t r = from; r < m.size(); ++r) {
    if constexpr (is_exact_v<T>) {
      if (m[r][col] != 0) return r;
    } else {
      if (std::abs(m[r][col]) > threshold && (!best || std::abs(m[r][col]) > std::abs(m[*best][col]))) best = r;
    }
  }
  return best;
}

}  // namespace detail

/// Gauss-Jordan inverse; nothing if the matrix is singular.
template <Scalar T>
std::optional<Matrix<T>> inverse(Matrix<T> a, double threshold = 1e-12) {
  const std::size_t n = a.size();
  Matrix<T> inv = zeros<T>(n, n);
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = T(1);
  double scale = 0;
  if constexpr (!is_exact_v<T>) {
    for (const auto& row : a) {
      for (double v : row) scale = std::max(scale, std::abs(v));
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    auto piv = detail::pick_pivot(a, col, col, threshold * std::max(scale, 1.0));
    if (!piv) return std::nullopt;
    std::swap(a[col], a[*piv]);
    std::swap(inv[col], inv[*piv]);
    const T p = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || is_zero(a[r][col])) continue;
      const T f = a[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

/// Solves m x = rhs for square m; nothing if singular.
template <Scalar T>
std::optional<std::vector<T>> solve(const Matrix<T>& m, const std::vector<T>& rhs, double threshold = 1e-12) {
  auto inv = inverse(m, threshold);
  if (!inv) return std::nullopt;
  std::vector<T> x(m.size(), T(0));
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) x[r] += (*inv)[r][c] * rhs[c];
  }
  return x;
}

/// Row-echelon rank; `threshold` is relative to the largest entry.
template <Scalar T>
std::size_t rank(Matrix<T> a, double threshold = 1e-10) {
  if (a.empty()) return 0;
  const std::size_t cols = a.front().size();
  double scale = 0;
  if constexpr (!is_exact_v<T>) {
    for (const auto& row : a) {
      for (double v : row) scale = std::max(scale, std::abs(v));
    }
  }
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < a.size(); ++col) {
    auto piv = detail::pick_pivot(a, col, r, threshold * std::max(scale, 1.0));
    if (!piv) continue;
    std::swap(a[r], a[*piv]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (is_zero(a[i][col])) continue;
      const T f = a[i][col] / a[r][col];
      for (std::size_t c = col; c < cols; ++c) a[i][c] -= f * a[r][c];
    }
    ++r;
  }
  return r;
}

template <Scalar T>
T determinant(Matrix<T> a) {
  const std::size_t n = a.size();
  T det(1);
  for (std::size_t col = 0; col < n; ++col) {
    auto piv = detail::pick_pivot(a, col, col, 0.0);
    if (!piv) return T(0);
    if (*piv != col) {
      std::swap(a[col], a[*piv]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero(a[r][col])) continue;
      const T f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

}  // namespace sparsepr::linalg
