#pragma once

// Brute-force reference verifiers. Nothing here calls the turnpike solver,
// the coefficient recovery, or the projection fusion; only the core types,
// compute_acf and canonicalize are shared.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "sparsepr/core.hpp"
#include "sparsepr/error.hpp"
#include "sparsepr/projection.hpp"
#include "sparsepr/scalar.hpp"
#include "sparsepr/types.hpp"

namespace sparsepr::oracle {

/// All integer supports {0 = s_1 < ... < s_N = max(diffs)} inside [0, bound]
/// whose positive difference multiset equals `diffs`, up to equivalence.
inline std::vector<EquivalenceClass<Rational>> exhaustive_turnpike(std::vector<long long> diffs, long long bound) {
  std::sort(diffs.begin(), diffs.end());
  std::size_t n = 0;
  while (n * (n - 1) / 2 < diffs.size()) ++n;
  if (diffs.empty() || n * (n - 1) / 2 != diffs.size()) {
    throw Error(ErrorKind::InvalidCardinality, "difference count is not N(N-1)/2 for N >= 2");
  }
  if (diffs.front() <= 0) throw Error(ErrorKind::InvalidCardinality, "differences must be positive");
  const long long width = diffs.back();
  if (bound < width) throw Error(ErrorKind::InvalidBound, "bound is below the largest difference");

  std::vector<EquivalenceClass<Rational>> found;
  std::vector<long long> chosen{0};
  auto check = [&] {
    std::vector<long long> pts = chosen;
    pts.push_back(width);
    std::vector<long long> d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) d.push_back(pts[j] - pts[i]);
    }
    std::sort(d.begin(), d.end());
    if (d != diffs) return;
    std::vector<Rational> positions(pts.begin(), pts.end());
    found.push_back(canonicalize(make_support_1d(positions)));
  };
  // Interior points strictly between 0 and width, increasing.
  std::function<void(long long)> choose = [&](long long next) {
    if (chosen.size() + 1 == n) {
      check();
      return;
    }
    for (long long v = next; v < width; ++v) {
      chosen.push_back(v);
      choose(v + 1);
      chosen.pop_back();
    }
  };
  if (n == 2) check();
  else choose(1);
  return unique_classes(std::move(found));
}

/// True iff the two point sets have equal positive difference multisets.
template <Scalar T>
bool homometry_check(const std::vector<T>& x, const std::vector<T>& y, const Tolerance& tol = {}) {
  if (x.size() != y.size()) return false;
  auto diffs = [](const std::vector<T>& pts) {
    std::vector<T> d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (pts[j] > pts[i]) d.push_back(pts[j] - pts[i]);
      }
    }
    std::sort(d.begin(), d.end());
    return d;
  };
  const auto dx = diffs(x);
  const auto dy = diffs(y);
  if (dx.size() != dy.size()) return false;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!same_position(dx[i], dy[i], tol)) return false;
  }
  return true;
}

namespace detail {

/// Determinant by cofactor expansion; D is tiny here.
template <Scalar T>
T determinant(const std::vector<std::vector<T>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  T det(0);
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<T>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<T> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      minor.push_back(std::move(row));
    }
    const T term = m[0][col] * determinant(minor);
    det += (col % 2 == 0) ? term : T(-term);
  }
  return det;
}

/// Cramer's rule.
template <Scalar T>
std::vector<T> cramer_solve(const std::vector<std::vector<T>>& m, const std::vector<T>& rhs) {
  const T det = determinant(m);
  std::vector<T> x(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    auto mk = m;
    for (std::size_t r = 0; r < m.size(); ++r) mk[r][k] = rhs[r];
    x[k] = determinant(mk) / det;
  }
  return x;
}

}  // namespace detail

/// Every D-dim point set assembled from the first D directions' 1-D
/// solutions (each centered at its centroid) over all spike associations and
/// per-direction reflections, kept only if its ACF equals `acf`.
/// Coefficients are taken from the first direction.
template <Scalar T>
std::vector<EquivalenceClass<T>> exhaustive_association(const DeltaAcf<T>& acf,
                                                        const std::vector<SpikeSignal<T>>& one_d_solutions,
                                                        const std::vector<ProjectionDirection<T>>& directions,
                                                        const Tolerance& tol = {}) {
  const std::size_t dim = acf.dim();
  if (directions.size() < dim || one_d_solutions.size() < dim) {
    throw Error(ErrorKind::InvalidAcf, "need one 1-D solution per base direction");
  }
  const std::size_t n = one_d_solutions.front().size();
  if (n > 6) throw Error(ErrorKind::TooLarge, "exhaustive association is limited to N <= 6");
  for (std::size_t j = 0; j < dim; ++j) {
    if (one_d_solutions[j].size() != n) return {};
  }

  std::vector<std::vector<T>> basis(dim);
  for (std::size_t j = 0; j < dim; ++j) basis[j] = directions[j].components();
  if (is_zero(detail::determinant(basis))) return {};

  // Centered 1-D positions per base direction.
  std::vector<std::vector<T>> centered(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const auto pos = one_d_solutions[j].positions_1d();
    T mean(0);
    for (const T& v : pos) mean += v;
    mean /= T(static_cast<long long>(n));
    for (const T& v : pos) centered[j].push_back(v - mean);
  }
  const auto base_coefs = one_d_solutions[0].coefficients();

  std::vector<EquivalenceClass<T>> found;
  std::vector<std::vector<std::size_t>> perms(dim);
  for (auto& p : perms) {
    p.resize(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
  }
  const std::size_t sign_patterns = std::size_t{1} << (dim - 1);

  std::function<void(std::size_t)> recurse = [&](std::size_t j) {
    if (j < dim) {
      std::sort(perms[j].begin(), perms[j].end());
      do {
        recurse(j + 1);
      } while (std::next_permutation(perms[j].begin(), perms[j].end()));
      return;
    }
    for (std::size_t pattern = 0; pattern < sign_patterns; ++pattern) {
      std::vector<Spike<T>> spikes;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<T> rhs(dim);
        rhs[0] = centered[0][i];
        for (std::size_t k = 1; k < dim; ++k) {
          const bool flip = (pattern >> (k - 1)) & 1u;
          const T w = centered[k][perms[k][i]];
          rhs[k] = flip ? T(-w) : w;
        }
        spikes.push_back({detail::cramer_solve(basis, rhs), base_coefs[i]});
      }
      try {
        SpikeSignal<T> candidate(dim, std::move(spikes), tol);
        if (acf_equal(compute_acf(candidate, tol), acf, tol)) found.push_back(canonicalize(candidate, tol));
      } catch (const Error&) {
        // coincident points: not a valid candidate
      }
    }
  };
  // The first direction's order and orientation are fixed.
  recurse(1);
  return unique_classes(std::move(found), tol);
}

}  // namespace sparsepr::oracle
