// Walks through the Bloom pair: two six-point supports with the same
// difference multiset, and what changing a single coefficient does.

#include <iostream>

#include "sparsepr/coefficients.hpp"
#include "sparsepr/core.hpp"
#include "sparsepr/turnpike.hpp"

using namespace sparsepr;

namespace {

// Canonical forms may carry a global sign of -1; print the positive one.
void print(const char* label, const SpikeSignal<Rational>& f) {
  const Rational sign = f[0].coefficient < 0 ? -1 : 1;
  std::cout << label << " {";
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::cout << (i ? ", " : "") << f[i].position[0];
    if (sign * f[i].coefficient != 1) std::cout << ":" << sign * f[i].coefficient;
  }
  std::cout << "}\n";
}

}  // namespace

int main() {
  const std::vector<Rational> x{0, 1, 4, 10, 12, 17};
  const std::vector<Rational> y{0, 1, 8, 11, 13, 17};

  const auto classes = solve_turnpike(DifferenceMultiset<Rational>::from_support(x));
  std::cout << "turnpike solutions for the differences of X: " << classes.size() << "\n";
  for (const auto& c : classes) print("  ", c.representative);

  const auto flat = classify_uniqueness_1d(compute_acf(make_support_1d(x)));
  std::cout << "unit coefficients: " << verdict_name<Rational>(flat.kind) << "\n";

  const auto bumped = make_signal_1d(x, std::vector<Rational>{1, 1, 1, 1, 1, 2});
  const auto v = classify_uniqueness_1d(compute_acf(bumped));
  std::cout << "last coefficient doubled: " << verdict_name<Rational>(v.kind) << "\n";
  if (!v.signals.empty()) print("  recovered", v.signals[0]);

  const auto m = is_bekir_member(x);
  if (m) std::cout << "X is the " << to_string(m->branch) << " branch at p = (" << m->p1 << ", " << m->p2 << ")\n";
}
