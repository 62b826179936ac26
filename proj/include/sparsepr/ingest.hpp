#pragma once

// Fourier-magnitude measurements to delta ACFs: plain |DFT|^2 grids,
// speckle stacks and channel-output periodograms.
//
// Grids are row-major with the last dimension fastest. Lag k on an axis of
// length M is stored at index k mod M; the signal extent must stay below half
// the grid per axis (M >= 2 * extent + 1) or lags wrap.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "sparsepr/error.hpp"
#include "sparsepr/scalar.hpp"
#include "sparsepr/types.hpp"

namespace sparsepr {

struct MagnitudeGrid {
  std::vector<std::size_t> dims;
  std::vector<double> values;

  std::size_t size() const {
    std::size_t n = dims.empty() ? 0 : 1;
    for (auto d : dims) n *= d;
    return n;
  }

  void validate() const {
    if (dims.empty() || size() == 0) throw Error(ErrorKind::EmptyInput, "grid has no samples");
    if (values.size() != size()) throw Error(ErrorKind::ShapeError, "grid values do not match dims");
  }
};

inline bool same_shape(const MagnitudeGrid& a, const MagnitudeGrid& b) { return a.dims == b.dims; }

namespace detail {

using Complex = std::complex<double>;

/// In-place separable DFT over every axis of a row-major grid.
inline void dft_nd(std::vector<Complex>& data, const std::vector<std::size_t>& dims, bool inverse) {
  Eigen::FFT<double> fft;
  std::size_t stride = 1;
  for (std::size_t axis = dims.size(); axis-- > 0;) {
    const std::size_t m = dims[axis];
    const std::size_t block = stride * m;
    std::vector<Complex> line(m), out(m);
    for (std::size_t start = 0; start < data.size(); start += block) {
      for (std::size_t offset = 0; offset < stride; ++offset) {
        for (std::size_t k = 0; k < m; ++k) line[k] = data[start + offset + k * stride];
        if (inverse) fft.inv(out, line);
        else fft.fwd(out, line);
        for (std::size_t k = 0; k < m; ++k) data[start + offset + k * stride] = out[k];
      }
    }
    stride = block;
  }
}

inline std::vector<std::size_t> unravel(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> idx(dims.size());
  for (std::size_t axis = dims.size(); axis-- > 0;) {
    idx[axis] = index % dims[axis];
    index /= dims[axis];
  }
  return idx;
}

inline std::size_t ravel(const std::vector<std::size_t>& idx, const std::vector<std::size_t>& dims) {
  std::size_t index = 0;
  for (std::size_t axis = 0; axis < dims.size(); ++axis) index = index * dims[axis] + idx[axis];
  return index;
}

/// Index of -k for every grid index k.
inline std::size_t mirror(std::size_t index, const std::vector<std::size_t>& dims) {
  auto idx = unravel(index, dims);
  for (std::size_t axis = 0; axis < dims.size(); ++axis) idx[axis] = (dims[axis] - idx[axis]) % dims[axis];
  return ravel(idx, dims);
}

}  // namespace detail

/// |DFT|^2 of a signal with integer positions placed on a grid of shape
/// `dims` (negative coordinates wrap).
template <Scalar T>
MagnitudeGrid power_spectrum(const SpikeSignal<T>& signal, const std::vector<std::size_t>& dims) {
  if (dims.size() != signal.dim()) throw Error(ErrorKind::ShapeError, "grid rank differs from signal dimension");
  MagnitudeGrid grid{dims, {}};
  std::vector<detail::Complex> data(grid.size(), 0.0);
  if (data.empty()) throw Error(ErrorKind::EmptyInput, "grid has no samples");
  for (const auto& s : signal.spikes()) {
    std::vector<std::size_t> idx(dims.size());
    for (std::size_t axis = 0; axis < dims.size(); ++axis) {
      const double x = to_double(s.position[axis]);
      if (x != std::round(x)) throw Error(ErrorKind::InvalidSignal, "grid placement needs integer positions");
      const auto m = static_cast<long long>(dims[axis]);
      idx[axis] = static_cast<std::size_t>(((static_cast<long long>(x) % m) + m) % m);
    }
    data[detail::ravel(idx, dims)] += to_double(s.coefficient);
  }
  detail::dft_nd(data, dims, false);
  grid.values.reserve(data.size());
  for (const auto& z : data) grid.values.push_back(std::norm(z));
  return grid;
}

struct IngestResult {
  DeltaAcf<double> acf;
  double threshold;  // absolute cut applied to |ACF| samples
  std::vector<std::string> warnings;
};

/// Inverse DFT of |F|^2, thresholded at tau * max into a delta ACF with
/// integer lags. Non-even grids, imaginary residue and empty results are
/// rejected as NotAnAcf; energy on a half-grid lag raises a PossibleAliasing
/// warning and that sample is dropped.
inline IngestResult acf_from_magnitude(const MagnitudeGrid& grid, double tau = 1e-6, double eps = 1e-9) {
  if (grid.dims.empty() || grid.size() == 0 || grid.values.empty()) {
    throw Error(ErrorKind::NotAnAcf, "empty magnitude grid");
  }
  grid.validate();
  const auto& dims = grid.dims;

  double vmax = 0;
  for (double v : grid.values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0) throw Error(ErrorKind::NotAnAcf, "all-zero magnitude grid");

  std::vector<detail::Complex> data(grid.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = grid.values[i];
    if (v < -eps * vmax) throw Error(ErrorKind::NotAnAcf, "negative squared magnitude");
    if (std::abs(v - grid.values[detail::mirror(i, dims)]) > eps * vmax) {
      throw Error(ErrorKind::NotAnAcf, "squared magnitudes are not even");
    }
    data[i] = std::max(v, 0.0);
  }
  detail::dft_nd(data, dims, true);

  double amax = 0;
  for (const auto& z : data) amax = std::max(amax, std::abs(z.real()));
  for (const auto& z : data) {
    if (std::abs(z.imag()) > eps * amax) {
      throw Error(ErrorKind::NotAnAcf, "inverse transform is not real");
    }
  }

  const double threshold = tau * amax;
  std::vector<std::string> warnings;
  std::vector<Delta<double>> deltas;
  bool aliasing = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t j = detail::mirror(i, dims);
    const double value = 0.5 * (data[i].real() + data[j].real());
    if (std::abs(value) <= threshold) continue;
    const auto idx = detail::unravel(i, dims);
    Point<double> lag(dims.size());
    bool edge = false;
    for (std::size_t axis = 0; axis < dims.size(); ++axis) {
      const auto m = dims[axis];
      if (m % 2 == 0 && idx[axis] == m / 2) edge = true;
      lag[axis] = idx[axis] <= (m - 1) / 2 ? static_cast<double>(idx[axis])
                                           : static_cast<double>(idx[axis]) - static_cast<double>(m);
    }
    if (edge) {
      aliasing = true;
      continue;
    }
    deltas.push_back({std::move(lag), value});
  }
  if (aliasing) warnings.emplace_back("PossibleAliasing: energy on a half-grid lag was dropped");
  try {
    return IngestResult{DeltaAcf<double>(dims.size(), std::move(deltas)), threshold, std::move(warnings)};
  } catch (const Error& e) {
    throw Error(ErrorKind::NotAnAcf, std::string("thresholded samples do not form an ACF: ") + e.what());
  }
}

/// Mean of the stack divided by max(psd, kappa * max(psd)).
inline MagnitudeGrid speckle_average(const std::vector<MagnitudeGrid>& stack, const MagnitudeGrid& psd,
                                     double kappa = 1e-6) {
  if (stack.empty()) throw Error(ErrorKind::EmptyInput, "empty speckle stack");
  psd.validate();
  for (const auto& g : stack) {
    g.validate();
    if (!same_shape(g, psd)) throw Error(ErrorKind::ShapeError, "speckle frame shape differs from psd");
  }
  const double pmax = *std::max_element(psd.values.begin(), psd.values.end());
  if (!(pmax > 0)) throw Error(ErrorKind::DegenerateParameter, "atmosphere psd has no positive entry");
  const double floor = kappa * pmax;

  MagnitudeGrid out{psd.dims, std::vector<double>(psd.size(), 0.0)};
  for (const auto& g : stack) {
    for (std::size_t i = 0; i < g.values.size(); ++i) out.values[i] += g.values[i];
  }
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] /= static_cast<double>(stack.size()) * std::max(psd.values[i], floor);
  }
  return out;
}

/// Averaged periodogram |DFT y|^2 / L over equal-length output vectors.
inline MagnitudeGrid channel_periodogram(const std::vector<std::vector<double>>& samples) {
  if (samples.empty() || samples.front().empty()) throw Error(ErrorKind::EmptyInput, "no channel samples");
  const std::size_t length = samples.front().size();
  MagnitudeGrid out{{length}, std::vector<double>(length, 0.0)};
  Eigen::FFT<double> fft;
  std::vector<detail::Complex> spectrum;
  for (const auto& y : samples) {
    if (y.size() != length) throw Error(ErrorKind::ShapeError, "channel sample vectors differ in length");
    std::vector<detail::Complex> in(y.begin(), y.end());
    fft.fwd(spectrum, in);
    for (std::size_t k = 0; k < length; ++k) out.values[k] += std::norm(spectrum[k]);
  }
  for (double& v : out.values) v /= static_cast<double>(samples.size() * length);
  return out;
}

}  // namespace sparsepr
