#pragma once

// Shared test helpers. The oracles here are deliberately naive and share no
// code with the library's solvers.

#include <map>
#include <random>
#include <set>
#include <vector>

#include "sparsepr/core.hpp"

namespace sparsepr::testing {

inline Rational Q(long long p, long long q = 1) { return Rational(p) / Rational(q); }

inline std::vector<Rational> Qs(std::initializer_list<long long> values) {
  std::vector<Rational> out;
  for (auto v : values) out.emplace_back(v);
  return out;
}

/// Direct expansion of the double sum over (n, m), merged through an
/// ordered map keyed by the exact lag.
inline std::map<std::vector<Rational>, Rational> naive_acf(const SpikeSignal<Rational>& f) {
  std::map<std::vector<Rational>, Rational> out;
  for (const auto& a : f.spikes()) {
    for (const auto& b : f.spikes()) {
      std::vector<Rational> lag(f.dim());
      for (std::size_t i = 0; i < f.dim(); ++i) lag[i] = b.position[i] - a.position[i];
      out[lag] += a.coefficient * b.coefficient;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

/// Random integer signal with distinct positions in [0, span]^D and nonzero
/// integer coefficients in [-cmax, cmax].
template <Scalar T>
SpikeSignal<T> random_integer_signal(std::mt19937_64& rng, std::size_t dim, std::size_t n, int span,
                                     int cmax = 5) {
  std::uniform_int_distribution<int> pos(0, span);
  std::uniform_int_distribution<int> coef(-cmax, cmax);
  std::set<std::vector<int>> seen;
  std::vector<Spike<T>> spikes;
  while (spikes.size() < n) {
    std::vector<int> p(dim);
    for (auto& v : p) v = pos(rng);
    if (!seen.insert(p).second) continue;
    int c = 0;
    while (c == 0) c = coef(rng);
    Point<T> pt;
    for (int v : p) pt.push_back(T(v));
    spikes.push_back({pt, T(c)});
  }
  return SpikeSignal<T>(dim, std::move(spikes));
}

/// Brute-force collision test: all ordered differences over n != m distinct.
template <Scalar T>
bool brute_collision_free(const SpikeSignal<T>& f) {
  std::vector<Point<T>> diffs;
  for (std::size_t n = 0; n < f.size(); ++n) {
    for (std::size_t m = 0; m < f.size(); ++m) {
      if (n != m) diffs.push_back(subtract(f[m].position, f[n].position));
    }
  }
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    for (std::size_t j = i + 1; j < diffs.size(); ++j) {
      if (diffs[i] == diffs[j]) return false;
    }
  }
  return true;
}

template <Scalar T>
SpikeSignal<T> random_collision_free_signal(std::mt19937_64& rng, std::size_t dim, std::size_t n, int span,
                                            int cmax = 5) {
  for (;;) {
    auto f = random_integer_signal<T>(rng, dim, n, span, cmax);
    if (brute_collision_free(f)) return f;
  }
}

}  // namespace sparsepr::testing
