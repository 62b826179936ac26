#include <gtest/gtest.h>

#include <random>

#include "sparsepr/core.hpp"
#include "test_support.hpp"

namespace sparsepr {
namespace {

using testing::naive_acf;
using testing::Q;
using testing::Qs;

void expect_matches_naive(const SpikeSignal<Rational>& f) {
  const auto acf = compute_acf(f);
  const auto oracle = naive_acf(f);
  ASSERT_EQ(acf.size(), oracle.size());
  std::size_t i = 0;
  for (const auto& [lag, coef] : oracle) {
    EXPECT_EQ(acf.deltas()[i].lag, lag);
    EXPECT_EQ(acf.deltas()[i].coefficient, coef);
    ++i;
  }
}

TEST(ComputeAcf, SingleSpike) {
  const auto acf = compute_acf(make_signal_1d(Qs({0}), Qs({3})));
  ASSERT_EQ(acf.size(), 1u);
  EXPECT_EQ(acf.deltas()[0].coefficient, Q(9));
}

TEST(ComputeAcf, TwoSpikes) {
  const auto f = make_signal_1d(Qs({0, 1}), Qs({1, 2}));
  expect_matches_naive(f);
  const auto acf = compute_acf(f);
  ASSERT_EQ(acf.size(), 3u);
  EXPECT_EQ(acf.deltas()[0].lag[0], Q(-1));
  EXPECT_EQ(acf.deltas()[0].coefficient, Q(2));
  EXPECT_EQ(acf.deltas()[1].coefficient, Q(5));
  EXPECT_EQ(acf.deltas()[2].coefficient, Q(2));
}

TEST(ComputeAcf, ThreeSpikes) {
  const auto f = make_signal_1d(Qs({0, 1, 3}), Qs({1, 2, 3}));
  expect_matches_naive(f);
  const auto acf = compute_acf(f);
  // -3 -2 -1 0 1 2 3
  const auto expected = Qs({3, 6, 2, 14, 2, 6, 3});
  ASSERT_EQ(acf.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(acf.deltas()[i].lag[0], Q(static_cast<long long>(i) - 3));
    EXPECT_EQ(acf.deltas()[i].coefficient, expected[i]);
  }
  EXPECT_EQ(acf.zero_lag_coefficient(), Q(14));
}

TEST(ComputeAcf, MergesCollidingLags) {
  const auto f = make_support_1d(Qs({0, 1, 2}));
  const auto acf = compute_acf(f);
  ASSERT_EQ(acf.size(), 5u);
  EXPECT_EQ(acf.deltas()[1].coefficient, Q(2));  // lag -1 hit twice
  expect_matches_naive(f);
}

TEST(ComputeAcf, RandomSignalsMatchDirectExpansion) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const std::size_t n = 1 + trial % 7;
    const auto f = testing::random_integer_signal<Rational>(rng, dim, n, 9);
    expect_matches_naive(f);
    const auto acf = compute_acf(f);
    Rational energy = 0;
    for (const auto& s : f.spikes()) energy += s.coefficient * s.coefficient;
    EXPECT_EQ(acf.zero_lag_coefficient(), energy);
    EXPECT_LE(acf.size(), n * n - n + 1);
    EXPECT_EQ(acf.size() == n * n - n + 1, !detect_collisions(f).has_collisions);
  }
}

TEST(ComputeAcf, PoseInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    const auto f = testing::random_integer_signal<Rational>(rng, dim, 5, 12);
    const auto base = compute_acf(f);
    Point<Rational> shift(dim);
    for (auto& v : shift) v = Q(static_cast<long long>(rng() % 21) - 10, 3);
    for (bool reflect : {false, true}) {
      for (bool flip : {false, true}) {
        const auto g = transform_pose(f, shift, reflect, flip);
        EXPECT_TRUE(acf_equal(base, compute_acf(g)));
      }
    }
  }
}

TEST(ComputeAcf, FloatingModeAgreesWithExact) {
  const auto f = make_signal_1d(std::vector<double>{0.0, 0.1, 0.3}, std::vector<double>{1.0, -2.0, 0.5});
  const auto acf = compute_acf(f);
  ASSERT_EQ(acf.size(), 7u);
  EXPECT_NEAR(acf.zero_lag_coefficient(), 5.25, 1e-12);
  EXPECT_NEAR(acf.deltas()[0].lag[0], -0.3, 1e-12);
  EXPECT_NEAR(acf.deltas()[0].coefficient, 0.5, 1e-12);
}

TEST(DetectCollisions, ArithmeticProgression) {
  const auto report = detect_collisions(make_support_1d(Qs({0, 1, 2, 3})));
  EXPECT_TRUE(report.has_collisions);
  const auto lag1 = std::find_if(report.groups.begin(), report.groups.end(),
                                 [](const auto& g) { return g.lag[0] == 1; });
  ASSERT_NE(lag1, report.groups.end());
  EXPECT_EQ(lag1->pairs.size(), 3u);
}

TEST(DetectCollisions, GolombRulerIsCollisionFree) {
  EXPECT_FALSE(detect_collisions(make_support_1d(Qs({0, 1, 4, 9, 11}))).has_collisions);
  EXPECT_FALSE(detect_collisions(make_support_1d(Qs({0, 1, 4, 10, 12, 17}))).has_collisions);
}

TEST(DetectCollisions, FromAcfWithClaimedCount) {
  const auto colliding = compute_acf(make_support_1d(Qs({0, 1, 2, 4})));
  EXPECT_TRUE(detect_collisions(colliding, 4).has_collisions);
  const auto clean = compute_acf(make_support_1d(Qs({0, 1, 3})));
  EXPECT_FALSE(detect_collisions(clean, 3).has_collisions);
  try {
    detect_collisions(clean, 2);
    FAIL() << "expected InvalidAcf";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidAcf);
  }
}

TEST(DetectCollisions, ZeroLagNeverCounts) {
  EXPECT_FALSE(detect_collisions(make_support_1d(Qs({0, 7}))).has_collisions);
  EXPECT_FALSE(detect_collisions(make_support_1d(Qs({4}))).has_collisions);
}

TEST(Canonicalize, TranslationAndReflection) {
  const auto a = make_signal_1d(Qs({5, 7}), Qs({1, 2}));
  const auto b = make_signal_1d(Qs({0, 2}), Qs({2, 1}));
  const auto ca = canonicalize(a).representative;
  const auto cb = canonicalize(b).representative;
  ASSERT_EQ(ca.size(), 2u);
  EXPECT_EQ(ca.positions_1d(), cb.positions_1d());
  EXPECT_EQ(ca.coefficients(), cb.coefficients());
  EXPECT_EQ(ca.positions_1d(), Qs({0, 2}));
  EXPECT_TRUE(same_class(a, b));
}

TEST(Canonicalize, SignFlip) {
  const auto f = make_signal_1d(Qs({0, 3, 4}), Qs({2, -1, 5}));
  const auto g = transform_pose(f, Point<Rational>{Q(0)}, false, true);
  EXPECT_EQ(canonicalize(f).representative.coefficients(), canonicalize(g).representative.coefficients());
}

TEST(Canonicalize, BloomSetsStayDistinct) {
  const auto x = make_support_1d(Qs({0, 1, 4, 10, 12, 17}));
  const auto y = make_support_1d(Qs({0, 1, 8, 11, 13, 17}));
  EXPECT_FALSE(same_class(x, y));
  EXPECT_NE(canonicalize(x).representative.positions_1d(), canonicalize(y).representative.positions_1d());
}

TEST(Canonicalize, IdempotentAndPoseInvariant) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const auto f = testing::random_integer_signal<Rational>(rng, dim, 1 + trial % 6, 8);
    const auto c = canonicalize(f).representative;
    const auto cc = canonicalize(c).representative;
    EXPECT_EQ(c.positions(), cc.positions());
    EXPECT_EQ(c.coefficients(), cc.coefficients());
    Point<Rational> shift(dim);
    for (auto& v : shift) v = Q(static_cast<long long>(rng() % 15) - 7);
    for (bool reflect : {false, true}) {
      for (bool flip : {false, true}) {
        const auto g = canonicalize(transform_pose(f, shift, reflect, flip)).representative;
        EXPECT_EQ(g.positions(), c.positions());
        EXPECT_EQ(g.coefficients(), c.coefficients());
      }
    }
  }
}

TEST(HalfSupport, DropsNegativeLags) {
  const auto acf = compute_acf(make_signal_1d(Qs({0, 1}), Qs({1, 2})));
  const auto half = half_support(acf);
  ASSERT_TRUE(half.half());
  ASSERT_EQ(half.size(), 2u);
  EXPECT_EQ(half.deltas()[0].coefficient, Q(5));
  EXPECT_EQ(half.deltas()[1].lag[0], Q(1));
  EXPECT_EQ(half.full_size(), 3u);
}

TEST(HalfSupport, RoundTrip) {
  const auto acf = compute_acf(make_signal_1d(Qs({0, 1, 3}), Qs({1, 2, 3})));
  EXPECT_TRUE(acf_equal(expand_full(half_support(acf)), acf));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testing::random_integer_signal<Rational>(rng, 2, 4, 6);
    const auto a = compute_acf(f);
    EXPECT_TRUE(acf_equal(expand_full(half_support(a)), a));
  }
}

TEST(HalfSupport, ZeroLagOnly) {
  const auto acf = compute_acf(make_signal_1d(Qs({2}), Qs({4})));
  const auto half = half_support(acf);
  EXPECT_EQ(half.size(), 1u);
  EXPECT_TRUE(acf_equal(half, acf));
}

TEST(DeltaAcf, RejectsInvalidForms) {
  using D = Delta<Rational>;
  auto expect_invalid = [](auto&& build) {
    try {
      build();
      FAIL() << "expected InvalidAcf";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidAcf);
    }
  };
  // half form without the zero lag
  expect_invalid([] { DeltaAcf<Rational>(1, {D{{Q(1)}, Q(2)}}, true); });
  // not centro-symmetric
  expect_invalid([] { DeltaAcf<Rational>(1, {D{{Q(0)}, Q(5)}, D{{Q(1)}, Q(2)}}, false); });
  // mismatched mirror coefficient
  expect_invalid([] { DeltaAcf<Rational>(1, {D{{Q(0)}, Q(5)}, D{{Q(1)}, Q(2)}, D{{Q(-1)}, Q(3)}}); });
}

TEST(SpikeSignal, RejectsInvalidSignals) {
  EXPECT_THROW(make_signal_1d(Qs({0, 0}), Qs({1, 1})), Error);
  EXPECT_THROW(make_signal_1d(Qs({0, 1}), Qs({1, 0})), Error);
  EXPECT_THROW(SpikeSignal<Rational>(1, {}), Error);
}

TEST(Scalar, RationalParsing) {
  EXPECT_EQ(parse_rational("3/6"), Q(1, 2));
  EXPECT_EQ(parse_rational(" -7 "), Q(-7));
  EXPECT_EQ(format_rational(Q(-4, 6)), "-2/3");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_EQ(sqrt_value(Q(9, 4)), Q(3, 2));
  EXPECT_THROW(sqrt_value(Q(2)), Error);
}

}  // namespace
}  // namespace sparsepr
