#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hdcx/errors.hpp"
#include "hdcx/theory.hpp"

using namespace hdcx;
using namespace hdcx::theory;

namespace {

// Enumerates all 2^N sign patterns of one bit position with S_1 fixed to +1
// and counts the patterns where the majority disagrees with S_1.
double enumerated_disagreement(unsigned n) {
  unsigned disagree = 0;
  const unsigned patterns = 1u << (n - 1);
  for (unsigned mask = 0; mask < patterns; ++mask) {
    int sum = 1;
    for (unsigned b = 0; b + 1 < n; ++b) sum += (mask >> b) & 1U ? -1 : 1;
    disagree += sum < 0;
  }
  return static_cast<double>(disagree) / patterns;
}

}  // namespace

TEST(PofN, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(p_of_n(1), 0.5);
  EXPECT_DOUBLE_EQ(p_of_n(3), 0.25);
  EXPECT_DOUBLE_EQ(p_of_n(5), 0.1875);
  EXPECT_DOUBLE_EQ(p_of_n(9), 0.13671875);
}

TEST(PofN, MatchesEnumeration) {
  for (unsigned n : {1u, 3u, 5u, 7u, 9u, 11u, 13u}) {
    EXPECT_DOUBLE_EQ(0.5 - p_of_n(n), enumerated_disagreement(n)) << n;
  }
}

TEST(PofN, RejectsEvenAndZero) {
  EXPECT_THROW(p_of_n(0), InvalidArgument);
  EXPECT_THROW(p_of_n(4), InvalidArgument);
  EXPECT_THROW(p_of_n(65), InvalidArgument);
  EXPECT_NO_THROW(p_of_n(63));
}

TEST(BundleDistance, SingleConstituentIsExactlyZero) {
  const auto r = estimate_bundle_distance(1, 2000, 20, SeededStream(1));
  EXPECT_EQ(r.mean, 0.0);
  EXPECT_EQ(r.max, 0.0);
  EXPECT_TRUE(r.passed);
}

TEST(BundleDistance, MatchesClosedForm) {
  const std::vector<std::pair<std::size_t, double>> cases{{3, 0.25}, {5, 0.3125}, {9, 0.36328125}};
  for (const auto& [n, ref] : cases) {
    const auto r = estimate_bundle_distance(n, 10000, 200, SeededStream(2));
    EXPECT_DOUBLE_EQ(r.reference, ref);
    EXPECT_NEAR(r.mean, ref, 0.01) << n;
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.trials, 200u);
    EXPECT_EQ(r.dim, 10000u);
  }
}

TEST(BundleSeparation, ConstituentBeatsRandomProbe) {
  for (std::size_t n : {3u, 5u, 9u}) {
    const auto r = estimate_bundle_separation(n, 10000, 200, SeededStream(3));
    EXPECT_GE(r.mean, 0.99) << n;
    EXPECT_TRUE(r.one_sided);
    EXPECT_TRUE(r.passed);
  }
}

TEST(FlipLaw, ReferenceValuesAndEstimates) {
  EXPECT_DOUBLE_EQ(estimate_flip_law(0.3, 0.5, 1000, 5, SeededStream(4)).reference, 0.5);
  const auto zero = estimate_flip_law(0.0, 0.3, 1000, 5, SeededStream(4));
  EXPECT_DOUBLE_EQ(zero.reference, 0.3);
  EXPECT_DOUBLE_EQ(zero.mean, 0.3);
  for (const auto& [d, p] : std::vector<std::pair<double, double>>{{0.2, 0.1}, {0.2, 0.2}, {0.4, 0.1}}) {
    const auto r = estimate_flip_law(d, p, 10000, 1000, SeededStream(5));
    EXPECT_NEAR(r.reference, d * (1 - 2 * p) + p, 1e-12);
    EXPECT_NEAR(r.mean, r.reference, 0.01);
    EXPECT_TRUE(r.passed);
  }
  EXPECT_THROW(estimate_flip_law(0.2001, 0.1, 1000, 5, SeededStream(4)), InvalidArgument);
}

TEST(OrderingPreservation, HighDimensionKeepsOrder) {
  const auto r = estimate_ordering_preservation(0.2, 0.3, 0.2, 10000, 1000, SeededStream(6));
  EXPECT_GE(r.mean, 0.99);
  EXPECT_TRUE(r.passed);
  const auto none = estimate_ordering_preservation(0.2, 0.3, 0.0, 1000, 50, SeededStream(6));
  EXPECT_EQ(none.mean, 1.0);
}

TEST(OrderingPreservation, LowDimensionIsVisiblyWorse) {
  const auto small = estimate_ordering_preservation(0.2, 0.3, 0.2, 100, 1000, SeededStream(7));
  const auto large = estimate_ordering_preservation(0.2, 0.3, 0.2, 10000, 1000, SeededStream(7));
  EXPECT_LT(small.mean, large.mean - 0.05);
  EXPECT_FALSE(small.passed);
}

TEST(OrderingPreservation, RejectsBadArguments) {
  EXPECT_THROW(estimate_ordering_preservation(0.3, 0.3, 0.1, 1000, 5, SeededStream(1)), InvalidArgument);
  EXPECT_THROW(estimate_ordering_preservation(0.2, 0.3, 0.5, 1000, 5, SeededStream(1)), InvalidArgument);
}

TEST(RandomPairs, ConcentrateAtOneHalf) {
  const auto pairs = estimate_random_pair_distance(10000, 1000, SeededStream(8));
  EXPECT_NEAR(pairs.mean, 0.5, 0.005);
  EXPECT_GE(pairs.min, 0.47);
  EXPECT_LE(pairs.max, 0.53);
  const auto bound = estimate_bound_distance(10000, 1000, SeededStream(9));
  EXPECT_NEAR(bound.mean, 0.5, 0.005);
  EXPECT_TRUE(bound.passed);
}

TEST(Estimators, DeterministicGivenSeed) {
  const auto a = estimate_bundle_distance(5, 2000, 30, SeededStream(10));
  const auto b = estimate_bundle_distance(5, 2000, 30, SeededStream(10));
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stddev, b.stddev);
}

TEST(NoiseCurve, ZeroAtZeroAndNonDecreasing) {
  NoiseCurveConfig cfg;
  const auto curve = estimate_noise_curve(cfg, {0.0, 0.05, 0.1, 0.2, 0.4, 1.0}, 200, SeededStream(11));
  ASSERT_EQ(curve.size(), 6u);
  EXPECT_EQ(curve[0].mean, 0.0);
  EXPECT_EQ(curve[0].max, 0.0);
  for (std::size_t i = 0; i < curve.size(); ++i) EXPECT_TRUE(curve[i].passed) << i;
  for (std::size_t i = 1; i < 5; ++i) EXPECT_GT(curve[i].mean, curve[i - 1].mean);
  EXPECT_LT(curve.back().mean, 0.5);
}

TEST(PositionUniformity, ConsistentWithBernoulli) {
  const auto check = check_position_uniformity(0.2, 1000, 400, 20, SeededStream(12));
  EXPECT_EQ(check.degrees_of_freedom, 19u);
  EXPECT_NEAR(check.critical_value, 30.14, 0.2);
  EXPECT_GT(check.statistic, 0.0);
}

TEST(AtDistance, ExactDistance) {
  SeededStream s(13);
  const auto base = random_hv(s, 1000);
  EXPECT_EQ(hamming_count(base, at_distance(base, 0.137, s)), 137u);
}
