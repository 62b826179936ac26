#pragma once

// D >= 2 recovery: project the ACF onto random 1-D subspaces, solve each 1-D
// problem, and fuse the 1-D solutions back into D-dimensional points.
//
// Fusion: every 1-D solution is centered at its centroid (the projection of
// the unknown centroid). Spikes are associated across the D base directions
// by coefficient, each association solved as P x = w, and every partial
// association is pruned against the validation direction(s). Each complete
// candidate is kept only if its ACF reproduces the measurement.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sparsepr/coefficients.hpp"
#include "sparsepr/core.hpp"
#include "sparsepr/error.hpp"
#include "sparsepr/linalg.hpp"
#include "sparsepr/projection.hpp"
#include "sparsepr/scalar.hpp"
#include "sparsepr/types.hpp"
#include "sparsepr/verdict.hpp"

namespace sparsepr {

struct RecoverOptions {
  std::uint64_t seed = 0;
  /// Attempt budget per needed direction.
  std::size_t max_attempts = 64;
  /// Total directions (D base + validation); defaults to D + 1.
  std::optional<std::size_t> directions;
  Tolerance tol{};
  /// Exact mode samples integer directions from [-range, range]^D.
  int exact_range = 50;
  /// Floating mode rejects base sets with |det P| below this.
  double min_base_determinant = 1e-2;
};

template <Scalar T>
struct AttemptRecord {
  std::vector<T> direction;
  std::string outcome;  // accepted | collision | ambiguous | not_covered:<reason> | dependent
};

template <Scalar T>
struct ProjectedProblem {
  ProjectionDirection<T> direction;
  DeltaAcf<T> acf1d;  // lags w = Y P^T
  UniquenessVerdict<T> verdict;
};

template <Scalar T>
struct MultidimRecovery {
  UniquenessVerdict<T> verdict;
  std::vector<ProjectedProblem<T>> projections;  // base directions first
  std::vector<AttemptRecord<T>> attempts;
};

/// Raised when the attempt budget runs out; carries the attempt log.
class GaveUpError : public Error {
 public:
  GaveUpError(const std::string& what, std::vector<std::string> log)
      : Error(ErrorKind::GaveUp, what), log_(std::move(log)) {}
  const std::vector<std::string>& attempt_log() const noexcept { return log_; }

 private:
  std::vector<std::string> log_;
};

namespace detail {

template <Scalar T>
std::vector<T> sample_direction(std::mt19937_64& rng, std::size_t dim, const RecoverOptions& opt) {
  std::vector<T> raw(dim);
  if constexpr (is_exact_v<T>) {
    std::uniform_int_distribution<int> dist(-opt.exact_range, opt.exact_range);
    bool nonzero = false;
    while (!nonzero) {
      for (auto& v : raw) {
        v = T(dist(rng));
        nonzero = nonzero || v != 0;
      }
    }
  } else {
    std::normal_distribution<double> dist(0.0, 1.0);
    double norm = 0;
    while (norm < 1e-6) {
      norm = 0;
      for (auto& v : raw) {
        v = dist(rng);
        norm += v * v;
      }
    }
  }
  return raw;
}

template <Scalar T>
std::string describe(const std::vector<T>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    if constexpr (is_exact_v<T>) os << format_rational(v[i]);
    else os << v[i];
  }
  os << ")";
  return os.str();
}

/// Centered positions and coefficients of a 1-D solution, with optional
/// reflection and sign flip applied.
template <Scalar T>
struct OrientedSolution {
  std::vector<T> positions;
  std::vector<T> coefficients;
};

template <Scalar T>
OrientedSolution<T> orient(const SpikeSignal<T>& s, bool reflect, bool flip) {
  OrientedSolution<T> out;
  T mean(0);
  for (const auto& sp : s.spikes()) mean += sp.position[0];
  mean /= T(static_cast<long long>(s.size()));
  for (const auto& sp : s.spikes()) {
    const T w = sp.position[0] - mean;
    out.positions.push_back(reflect ? T(-w) : w);
    out.coefficients.push_back(flip ? T(-sp.coefficient) : sp.coefficient);
  }
  return out;
}

template <Scalar T>
bool same_coefficient_multiset(std::vector<T> a, std::vector<T> b, const Tolerance& tol) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_coefficient(a[i], b[i], tol)) return false;
  }
  return true;
}

template <Scalar T>
std::vector<EquivalenceClass<T>> fuse_projections(const DeltaAcf<T>& full,
                                                  const std::vector<ProjectedProblem<T>>& problems,
                                                  const Tolerance& tol) {
  const std::size_t dim = full.dim();
  const std::size_t total = problems.size();
  const std::size_t n = problems.front().verdict.signals.front().size();

  linalg::Matrix<T> basis;
  for (std::size_t j = 0; j < dim; ++j) basis.push_back(problems[j].direction.components());
  const auto inv = linalg::inverse(basis);
  if (!inv) throw Error(ErrorKind::SingularSystem, "base directions are linearly dependent");

  std::vector<EquivalenceClass<T>> found;
  const std::size_t patterns = std::size_t{1} << (2 * (total - 1));
  for (std::size_t pattern = 0; pattern < patterns; ++pattern) {
    std::vector<OrientedSolution<T>> sol;
    sol.push_back(orient(problems[0].verdict.signals[0], false, false));
    bool compatible = true;
    for (std::size_t j = 1; j < total && compatible; ++j) {
      const bool reflect = (pattern >> (2 * (j - 1))) & 1u;
      const bool flip = (pattern >> (2 * (j - 1) + 1)) & 1u;
      sol.push_back(orient(problems[j].verdict.signals[0], reflect, flip));
      compatible = sol.back().positions.size() == n &&
                   same_coefficient_multiset(sol.back().coefficients, sol[0].coefficients, tol);
    }
    if (!compatible) continue;

    std::vector<std::vector<bool>> used(total, std::vector<bool>(n, false));
    std::vector<Point<T>> points;
    std::vector<T> w(dim);

    std::function<void(std::size_t, std::size_t)> assign = [&](std::size_t i, std::size_t j) {
      if (i == n) {
        std::vector<Spike<T>> spikes;
        for (std::size_t k = 0; k < n; ++k) spikes.push_back({points[k], sol[0].coefficients[k]});
        try {
          SpikeSignal<T> candidate(dim, std::move(spikes), tol);
          if (acf_equal(compute_acf(candidate, tol), full, tol)) found.push_back(canonicalize(candidate, tol));
        } catch (const Error&) {
          // coincident points
        }
        return;
      }
      if (j == 0) {
        w[0] = sol[0].positions[i];
        assign(i, 1);
        return;
      }
      if (j < dim) {
        for (std::size_t k = 0; k < n; ++k) {
          if (used[j][k] || !same_coefficient(sol[j].coefficients[k], sol[0].coefficients[i], tol)) continue;
          used[j][k] = true;
          w[j] = sol[j].positions[k];
          assign(i, j + 1);
          used[j][k] = false;
        }
        return;
      }
      // All base coordinates chosen: solve and check validation directions.
      Point<T> x(dim, T(0));
      for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) x[r] += (*inv)[r][c] * w[c];
      }
      std::vector<std::pair<std::size_t, std::size_t>> claimed;
      bool ok = true;
      for (std::size_t v = dim; v < total && ok; ++v) {
        const T proj = problems[v].direction.apply(x);
        ok = false;
        for (std::size_t k = 0; k < n; ++k) {
          if (used[v][k] || !same_position(sol[v].positions[k], proj, tol) ||
              !same_coefficient(sol[v].coefficients[k], sol[0].coefficients[i], tol)) {
            continue;
          }
          used[v][k] = true;
          claimed.emplace_back(v, k);
          ok = true;
          break;
        }
      }
      if (ok) {
        points.push_back(x);
        assign(i + 1, 0);
        points.pop_back();
      }
      for (auto [v, k] : claimed) used[v][k] = false;
    };
    assign(0, 0);
  }
  return unique_classes(std::move(found), tol);
}

}  // namespace detail

/// Recovers a D-dimensional (D >= 2) signal from its ACF through random
/// 1-D projections. Directions whose projected ACF has collisions or whose
/// 1-D problem is not uniquely solvable are resampled.
template <Scalar T>
MultidimRecovery<T> recover_multidim(const DeltaAcf<T>& acf, const RecoverOptions& opt = {}) {
  using Verdict = UniquenessVerdict<T>;
  const Tolerance& tol = opt.tol;
  const std::size_t dim = acf.dim();
  if (dim < 2) throw Error(ErrorKind::InvalidAcf, "multi-dimensional recovery needs D >= 2");
  const auto full = expand_full(acf, tol);

  MultidimRecovery<T> out{Verdict::not_covered("collisions"), {}, {}};
  const auto n = implied_spike_count(full.size());
  if (!n) return out;
  if (*n == 1) {
    out.verdict = Verdict::unique(SpikeSignal<T>(
        dim, {Spike<T>{Point<T>(dim, T(0)), sqrt_value(full.zero_lag_coefficient())}}, tol));
    return out;
  }

  const std::size_t needed = std::max(opt.directions.value_or(dim + 1), dim);
  const std::size_t budget = opt.max_attempts * needed;
  std::mt19937_64 rng(opt.seed);
  std::vector<std::string> log;

  for (std::size_t attempt = 0; attempt < budget && out.projections.size() < needed; ++attempt) {
    auto direction = ProjectionDirection<T>::from_raw(detail::sample_direction<T>(rng, dim, opt));
    auto record = [&](std::string outcome) {
      log.push_back(detail::describe(direction.components()) + ": " + outcome);
      out.attempts.push_back({direction.components(), std::move(outcome)});
    };

    if (out.projections.size() < dim) {
      linalg::Matrix<T> rows;
      for (const auto& p : out.projections) rows.push_back(p.direction.components());
      rows.push_back(direction.components());
      bool independent = linalg::rank(rows, 1e-9) == rows.size();
      if (independent && rows.size() == dim) {
        if constexpr (!is_exact_v<T>) {
          independent = std::abs(linalg::determinant(rows)) >= opt.min_base_determinant;
        }
      }
      if (!independent) {
        record("dependent");
        continue;
      }
    }

    auto projected = project_acf(full, direction, tol);
    if (projected.size() != full.size()) {
      record("collision");
      continue;
    }
    auto verdict = classify_uniqueness_1d(projected, tol);
    if (verdict.kind == Verdict::Kind::Ambiguous) {
      record("ambiguous");
      continue;
    }
    if (verdict.kind == Verdict::Kind::NotCovered) {
      record("not_covered:" + verdict.reason);
      continue;
    }
    record("accepted");
    out.projections.push_back({std::move(direction), std::move(projected), std::move(verdict)});
  }

  if (out.projections.size() < needed) {
    throw GaveUpError("accepted " + std::to_string(out.projections.size()) + " of " + std::to_string(needed) +
                          " directions after " + std::to_string(out.attempts.size()) + " attempts",
                      std::move(log));
  }

  auto classes = detail::fuse_projections(full, out.projections, tol);
  if (classes.empty()) throw Error(ErrorKind::InconsistentAcf, "no fused candidate reproduces the ACF");
  if (classes.size() == 1) {
    out.verdict = Verdict::unique(std::move(classes.front().representative));
  } else {
    std::vector<SpikeSignal<T>> witnesses;
    for (auto& c : classes) witnesses.push_back(std::move(c.representative));
    out.verdict = Verdict::ambiguous(std::move(witnesses));
  }
  return out;
}

}  // namespace sparsepr
