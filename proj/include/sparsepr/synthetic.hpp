#pragma once

// Synthetic instances: random spike signals, line embeddings, Bekir supports,
// speckle frames and channel outputs.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "sparsepr/core.hpp"
#include "sparsepr/ingest.hpp"
#include "sparsepr/turnpike.hpp"
#include "sparsepr/types.hpp"

namespace sparsepr::synthetic {

struct SignalSpec {
  std::size_t dim = 1;
  std::size_t n = 4;
  int span = 16;         // positions drawn from [0, span]^D
  int max_coef = 5;      // coefficients from [-max_coef, max_coef] \ {0}
  bool collision_free = false;
  std::size_t max_tries = 100000;
};

/// Random integer-valued signal; redrawn until collision-free when asked.
template <Scalar T>
SpikeSignal<T> random_signal(std::mt19937_64& rng, const SignalSpec& spec) {
  if (spec.dim == 0 || spec.n == 0 || spec.span < 0 || spec.max_coef < 1) {
    throw Error(ErrorKind::DegenerateParameter, "invalid generator parameters");
  }
  std::uniform_int_distribution<int> pos(0, spec.span);
  std::uniform_int_distribution<int> coef(-spec.max_coef, spec.max_coef);
  for (std::size_t attempt = 0; attempt < spec.max_tries; ++attempt) {
    std::set<std::vector<int>> seen;
    std::vector<Spike<T>> spikes;
    for (std::size_t guard = 0; spikes.size() < spec.n && guard < 100 * spec.n; ++guard) {
      std::vector<int> p(spec.dim);
      for (auto& v : p) v = pos(rng);
      if (!seen.insert(p).second) continue;
      int c = 0;
      while (c == 0) c = coef(rng);
      Point<T> pt;
      for (int v : p) pt.emplace_back(v);
      spikes.push_back({std::move(pt), T(c)});
    }
    if (spikes.size() < spec.n) break;
    SpikeSignal<T> f(spec.dim, std::move(spikes));
    if (!spec.collision_free || !detect_collisions(f).has_collisions) return f;
  }
  throw Error(ErrorKind::GaveUp, "could not draw a signal with the requested properties");
}

/// Places a 1-D signal on the line offset + t * direction.
template <Scalar T>
SpikeSignal<T> embed_on_line(const SpikeSignal<T>& line, const Point<T>& direction, const Point<T>& offset) {
  if (line.dim() != 1 || direction.size() != offset.size()) {
    throw Error(ErrorKind::InvalidSignal, "embedding needs a 1-D signal and matching direction/offset");
  }
  std::vector<Spike<T>> spikes;
  for (const auto& s : line.spikes()) {
    Point<T> p(offset);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += s.position[0] * direction[i];
    spikes.push_back({std::move(p), s.coefficient});
  }
  return SpikeSignal<T>(offset.size(), std::move(spikes));
}

/// Unit-coefficient Bekir support for parameter (p1, p2).
template <Scalar T>
SpikeSignal<T> bekir_signal(const T& p1, const T& p2, BekirBranch branch) {
  return make_support_1d(BekirFamily::sorted_points(p1, p2, branch));
}

/// Frames |DFT(f * h_k)|^2 where each h_k has a random Hermitian phase
/// screen with optional amplitude jitter. Returns the stack and the screen
/// power E|H|^2 = 1 + jitter^2.
struct SpeckleStack {
  std::vector<MagnitudeGrid> frames;
  MagnitudeGrid psd;
};

template <Scalar T>
SpeckleStack speckle_frames(const SpikeSignal<T>& signal, const std::vector<std::size_t>& dims, std::size_t count,
                            std::mt19937_64& rng, double jitter = 0.0) {
  const auto truth = power_spectrum(signal, dims);
  const std::size_t size = truth.size();

  // Signal spectrum (complex) on the grid.
  std::vector<detail::Complex> spectrum(size, 0.0);
  for (const auto& s : signal.spikes()) {
    std::vector<std::size_t> idx(dims.size());
    for (std::size_t axis = 0; axis < dims.size(); ++axis) {
      const auto m = static_cast<long long>(dims[axis]);
      const auto x = static_cast<long long>(std::llround(to_double(s.position[axis])));
      idx[axis] = static_cast<std::size_t>(((x % m) + m) % m);
    }
    spectrum[detail::ravel(idx, dims)] += to_double(s.coefficient);
  }
  detail::dft_nd(spectrum, dims, false);

  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  std::normal_distribution<double> normal;
  SpeckleStack out{{}, MagnitudeGrid{dims, std::vector<double>(size, 1.0 + jitter * jitter)}};
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<detail::Complex> screen(size);
    std::vector<bool> done(size, false);
    for (std::size_t i = 0; i < size; ++i) {
      if (done[i]) continue;
      const std::size_t j = detail::mirror(i, dims);
      const double amp = 1.0 + jitter * normal(rng);
      const double phi = i == j ? (phase(rng) < 0 ? std::numbers::pi : 0.0) : phase(rng);
      screen[i] = std::polar(amp, phi);
      screen[j] = std::conj(screen[i]);
      done[i] = done[j] = true;
    }
    // Real image: inverse transform of the distorted spectrum, then measured.
    std::vector<detail::Complex> image(size);
    for (std::size_t i = 0; i < size; ++i) image[i] = spectrum[i] * screen[i];
    detail::dft_nd(image, dims, true);
    for (auto& z : image) z = z.real();
    detail::dft_nd(image, dims, false);
    MagnitudeGrid frame{dims, {}};
    frame.values.reserve(size);
    for (const auto& z : image) frame.values.push_back(std::norm(z));
    out.frames.push_back(std::move(frame));
  }
  return out;
}

/// Outputs y = g (*) x (circular) for unit-variance white Gaussian inputs x.
inline std::vector<std::vector<double>> channel_outputs(const std::vector<double>& taps, std::size_t length,
                                                        std::size_t count, std::mt19937_64& rng) {
  if (taps.size() > length) throw Error(ErrorKind::ShapeError, "channel longer than the output");
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> x(length);
    for (auto& v : x) v = normal(rng);
    std::vector<double> y(length, 0.0);
    for (std::size_t t = 0; t < length; ++t) {
      for (std::size_t i = 0; i < taps.size(); ++i) y[(t + i) % length] += taps[i] * x[t];
    }
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace sparsepr::synthetic
