#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "sparsepr/coefficients.hpp"
#include "sparsepr/ingest.hpp"
#include "sparsepr/synthetic.hpp"
#include "test_support.hpp"

using namespace sparsepr;
using namespace sparsepr::testing;

namespace {

/// Direct O(M^2) DFT magnitude of integer spikes on a 1-D or 2-D grid.
MagnitudeGrid naive_power(const std::vector<std::pair<std::vector<long long>, double>>& spikes,
                          const std::vector<std::size_t>& dims) {
  const std::size_t rows = dims.size() == 2 ? dims[0] : 1;
  const std::size_t cols = dims.back();
  MagnitudeGrid g{dims, {}};
  for (std::size_t u = 0; u < rows; ++u) {
    for (std::size_t v = 0; v < cols; ++v) {
      std::complex<double> acc = 0;
      for (const auto& [pos, c] : spikes) {
        double arg = 0;
        if (dims.size() == 2) arg += static_cast<double>(u) * static_cast<double>(pos[0]) / static_cast<double>(rows);
        arg += static_cast<double>(v) * static_cast<double>(pos.back()) / static_cast<double>(cols);
        acc += c * std::polar(1.0, -2 * std::numbers::pi * arg);
      }
      g.values.push_back(std::norm(acc));
    }
  }
  return g;
}

std::vector<std::pair<std::vector<long long>, double>> as_pairs(const SpikeSignal<Rational>& f) {
  std::vector<std::pair<std::vector<long long>, double>> out;
  for (const auto& s : f.spikes()) {
    std::vector<long long> p;
    for (const auto& v : s.position) p.push_back(static_cast<long long>(boost::multiprecision::numerator(v)));
    out.emplace_back(p, to_double(s.coefficient));
  }
  return out;
}

double rms_relative(const std::vector<double>& est, const std::vector<double>& truth) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    num += (est[i] - truth[i]) * (est[i] - truth[i]);
    den += truth[i] * truth[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST(AcfFromMagnitude, TwoSpikeEightPoint) {
  const auto grid = naive_power({{{0}, 1.0}, {{1}, 2.0}}, {8});
  const auto r = acf_from_magnitude(grid);
  ASSERT_EQ(r.acf.size(), 3u);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_NEAR(r.acf.zero_lag_coefficient(), 5.0, 1e-12);
  for (const auto& d : r.acf.deltas()) {
    if (d.lag[0] != 0) {
      EXPECT_EQ(std::abs(d.lag[0]), 1.0);
      EXPECT_NEAR(d.coefficient, 2.0, 1e-12);
    }
  }
}

TEST(AcfFromMagnitude, ThreeUnitSpikes) {
  const auto f = make_support_1d(Qs({0, 1, 4}));
  const auto r = acf_from_magnitude(naive_power(as_pairs(f), {16}));
  EXPECT_EQ(r.acf.size(), 7u);
  const auto expected = compute_acf(f);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(r.acf.deltas()[i].lag[0], to_double(expected.deltas()[i].lag[0]));
    EXPECT_NEAR(r.acf.deltas()[i].coefficient, to_double(expected.deltas()[i].coefficient), 1e-12);
  }
}

TEST(AcfFromMagnitude, Rejections) {
  EXPECT_THROW(acf_from_magnitude(MagnitudeGrid{{8}, std::vector<double>(8, 0.0)}), Error);
  try {
    acf_from_magnitude(MagnitudeGrid{{}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAnAcf);
  }
  MagnitudeGrid odd{{4}, {1.0, 2.0, 1.0, 0.5}};  // V(1) != V(-1)
  try {
    acf_from_magnitude(odd);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAnAcf);
  }
  EXPECT_THROW(acf_from_magnitude(MagnitudeGrid{{4}, {1.0, 1.0}}), Error);
}

TEST(AcfFromMagnitude, HalfGridLagWarns) {
  const auto r = acf_from_magnitude(naive_power({{{0}, 1.0}, {{8}, 1.0}}, {16}));
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("PossibleAliasing"), std::string::npos);
  EXPECT_EQ(r.acf.size(), 1u);
}

TEST(AcfFromMagnitude, RoundTripOneAndTwoD) {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    const auto f = random_integer_signal<Rational>(rng, dim, 2 + trial % 5, 7);
    const std::vector<std::size_t> dims(dim, 16);
    const auto grid = naive_power(as_pairs(f), dims);
    const auto lib = power_spectrum(f, dims);
    for (std::size_t i = 0; i < grid.values.size(); ++i) ASSERT_NEAR(lib.values[i], grid.values[i], 1e-9);

    const auto r = acf_from_magnitude(grid, 1e-9);
    const auto expected = naive_acf(f);
    ASSERT_EQ(r.acf.size(), expected.size());
    for (const auto& d : r.acf.deltas()) {
      std::vector<Rational> lag;
      for (double v : d.lag) lag.emplace_back(static_cast<long long>(v));
      auto it = expected.find(lag);
      ASSERT_NE(it, expected.end());
      EXPECT_NEAR(d.coefficient, to_double(it->second), 1e-9);
    }
  }
}

TEST(SpeckleAverage, IdentityAndFloor) {
  MagnitudeGrid frame{{4}, {4.0, 1.0, 0.0, 1.0}};
  const auto same = speckle_average({frame}, MagnitudeGrid{{4}, {1.0, 1.0, 1.0, 1.0}}, 1e-6);
  EXPECT_EQ(same.values, frame.values);

  const auto bounded = speckle_average({frame}, MagnitudeGrid{{4}, {1.0, 0.0, 0.0, 0.0}}, 1e-6);
  for (double v : bounded.values) EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(bounded.values[1], 1e6, 1e-3);
}

TEST(SpeckleAverage, Errors) {
  MagnitudeGrid a{{4}, {1, 1, 1, 1}};
  MagnitudeGrid b{{2, 2}, {1, 1, 1, 1}};
  try {
    speckle_average({a, b}, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeError);
  }
  try {
    speckle_average({}, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyInput);
  }
}

TEST(SpeckleAverage, RandomPhaseScreens) {
  std::mt19937_64 rng(32);
  const auto f = make_signal_1d(Qs({0, 3}), Qs({2, 1}));
  const auto stack = synthetic::speckle_frames(f, {32}, 32, rng, 0.01);
  const auto estimate = speckle_average(stack.frames, stack.psd, 1e-6);
  const auto truth = naive_power(as_pairs(f), {32});
  EXPECT_LE(rms_relative(estimate.values, truth.values), 0.01);

  const auto r = acf_from_magnitude(estimate, 0.05);
  EXPECT_EQ(r.acf.size(), 3u);
  const auto v = classify_uniqueness_1d(r.acf, Tolerance{1e-9, 1e-2});
  EXPECT_EQ(v.kind, UniquenessVerdict<double>::Kind::Unique);
}

TEST(ChannelPeriodogram, ImpulseResponse) {
  const std::vector<double> g{1.0, 0.0, 0.0, -0.5, 0.0, 0.0, 0.25, 0.0};
  const auto p = channel_periodogram({g});
  const auto truth = naive_power({{{0}, 1.0}, {{3}, -0.5}, {{6}, 0.25}}, {8});
  for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(p.values[k], truth.values[k] / 8.0, 1e-12);
}

TEST(ChannelPeriodogram, WhiteInputMonteCarlo) {
  std::mt19937_64 rng(34);
  const std::vector<double> taps{1.0, 0.0, 0.6, 0.0, 0.0, -0.4};
  const auto outputs = synthetic::channel_outputs(taps, 64, 200, rng);
  const auto p = channel_periodogram(outputs);
  const auto truth = naive_power({{{0}, 1.0}, {{2}, 0.6}, {{5}, -0.4}}, {64});
  EXPECT_LE(rms_relative(p.values, truth.values), 0.10);
}

TEST(ChannelPeriodogram, Errors) {
  try {
    channel_periodogram({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyInput);
  }
  try {
    channel_periodogram({{}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyInput);
  }
  EXPECT_THROW(channel_periodogram({{1.0, 2.0}, {1.0}}), Error);
}
