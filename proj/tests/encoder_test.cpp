#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <vector>

#include "hdcx/encoder.hpp"
#include "hdcx/errors.hpp"

using namespace hdcx;

namespace {

Matrix uniform_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  SeededStream s(seed);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = s.uniform();
  return m;
}

EncoderModel make_encoder(std::size_t dim, std::size_t levels, std::size_t features, std::uint64_t seed = 0) {
  return EncoderModel(EncoderConfig{dim, levels, seed},
                      FeatureQuantizer::fit(uniform_matrix(200, features, 1000 + seed), levels));
}

}  // namespace

TEST(LevelSet, ExactDistancesDefaultConfig) {
  SeededStream s(1);
  const auto levels = LevelSet::build(s, 10000, 101);
  ASSERT_EQ(levels.size(), 101u);
  for (std::size_t i = 1; i <= 101; ++i) {
    for (std::size_t j = i; j <= 101; ++j) {
      const std::size_t gap = j - i;
      ASSERT_EQ(hamming_count(levels.level(i), levels.level(j)), gap * 100) << i << "," << j;
    }
  }
}

TEST(LevelSet, EachPositionFlipsAtMostOnce) {
  SeededStream s(2);
  const auto levels = LevelSet::build(s, 600, 7);
  std::vector<int> flips(600, 0);
  for (std::size_t m = 2; m <= 7; ++m) {
    const auto diff = bind(levels.level(m - 1), levels.level(m));
    for (std::size_t i = 0; i < 600; ++i) flips[i] += diff.is_negative(i);
  }
  for (int f : flips) EXPECT_EQ(f, 1);
}

TEST(LevelSet, TwoLevelsAreNegations) {
  SeededStream s(3);
  const auto levels = LevelSet::build(s, 100, 2);
  EXPECT_EQ(levels.level(2), negate(levels.level(1)));
  EXPECT_DOUBLE_EQ(hamming(levels.level(1), levels.level(2)), 1.0);
}

TEST(LevelSet, RejectsNonDivisibleDimension) {
  SeededStream s(4);
  try {
    LevelSet::build(s, 1000, 8);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("7"), std::string::npos);
    EXPECT_NE(msg.find("1000"), std::string::npos);
  }
  EXPECT_THROW(LevelSet::build(s, 1000, 1), ConfigError);
  EXPECT_THROW(validate(EncoderConfig{10000, 100, 0}), ConfigError);
  EXPECT_NO_THROW(validate(EncoderConfig{10000, 101, 0}));
}

TEST(LevelSet, RegeneratesFromSeed) {
  SeededStream a(5), b(5);
  const auto x = LevelSet::build(a, 1000, 11);
  const auto y = LevelSet::build(b, 1000, 11);
  for (std::size_t m = 1; m <= 11; ++m) EXPECT_EQ(x.level(m), y.level(m));
}

TEST(IdDictionary, PairsNearOrthogonal) {
  const auto ids = IdDictionary::build(SeededStream(6), 10000, 30);
  const double band = 6 * std::sqrt(0.25 / 10000);
  for (std::size_t a = 0; a < 30; ++a)
    for (std::size_t b = a + 1; b < 30; ++b) EXPECT_NEAR(hamming(ids.id(a), ids.id(b)), 0.5, band);
}

TEST(IdDictionary, PrefixStable) {
  const auto small = IdDictionary::build(SeededStream(6), 500, 3);
  const auto large = IdDictionary::build(SeededStream(6), 500, 10);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(small.id(n), large.id(n));
}

TEST(Quantizer, InterpolatedQuantilesOfGrid) {
  Matrix m(101, 1);
  for (std::size_t i = 0; i <= 100; ++i) m(i, 0) = static_cast<double>(100 - i);
  const auto q = FeatureQuantizer::fit(m, 101);
  EXPECT_DOUBLE_EQ(q.bounds(0).lower, 2.0);
  EXPECT_DOUBLE_EQ(q.bounds(0).upper, 98.0);
}

TEST(Quantizer, InterpolatesBetweenOrderStatistics) {
  const std::vector<double> v{0.0, 10.0};
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.02), 0.2);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.98), 9.8);
  const std::vector<double> w{1.0, 2.0, 4.0};
  EXPECT_DOUBLE_EQ(quantile_sorted(w, 0.75), 3.0);
}

TEST(Quantizer, ConstantAndSpreadFeaturesIndependent) {
  Matrix m(101, 2);
  for (std::size_t i = 0; i <= 100; ++i) {
    m(i, 0) = 3.5;
    m(i, 1) = static_cast<double>(i);
  }
  const auto q = FeatureQuantizer::fit(m, 101);
  EXPECT_DOUBLE_EQ(q.bounds(0).lower, 3.5);
  EXPECT_DOUBLE_EQ(q.bounds(0).upper, 3.5);
  EXPECT_DOUBLE_EQ(q.bounds(1).lower, 2.0);
  EXPECT_DOUBLE_EQ(q.bounds(1).upper, 98.0);
  EXPECT_EQ(q.degenerate_features(), std::vector<std::size_t>{0});
  EXPECT_EQ(q.level_index(0, 3.5), 1u);
  EXPECT_EQ(q.level_index(0, 1e9), 1u);
  EXPECT_EQ(q.level_index(0, -1e9), 1u);
}

TEST(Quantizer, FitErrors) {
  EXPECT_THROW(FeatureQuantizer::fit(Matrix(1, 3), 101), ConfigError);
  Matrix bad(3, 1);
  bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(FeatureQuantizer::fit(bad, 101), DataError);
  bad(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(FeatureQuantizer::fit(bad, 101), DataError);
}

TEST(Quantizer, LevelIndexFormula) {
  const FeatureQuantizer q({{0.0, 1.0}}, 10);
  EXPECT_EQ(q.level_index(0, 0.55), 6u);
  EXPECT_EQ(q.level_index(0, 0.0), 1u);
  EXPECT_EQ(q.level_index(0, -5.0), 1u);
  EXPECT_EQ(q.level_index(0, 1.0), 10u);
  EXPECT_EQ(q.level_index(0, 1e12), 10u);
  EXPECT_EQ(q.level_index(0, 0.0999), 1u);
  EXPECT_EQ(q.level_index(0, 0.1), 2u);
  EXPECT_EQ(q.level_index(0, 0.95), 10u);
  EXPECT_THROW(q.level_index(0, std::nan("")), DataError);
}

TEST(QuantizerProperty, LevelIndexAlwaysInRange) {
  SeededStream s(8);
  const FeatureQuantizer q({{-2.0, 3.0}}, 101);
  for (int t = 0; t < 10000; ++t) {
    const double x = s.uniform(-10.0, 10.0);
    const auto m = q.level_index(0, x);
    ASSERT_GE(m, 1u);
    ASSERT_LE(m, 101u);
  }
}

TEST(Encoder, SingleFeatureIsTheBoundPair) {
  const auto enc = make_encoder(1000, 11, 1);
  for (double x : {0.0, 0.3, 0.71, 1.0}) {
    const std::vector<double> s{x};
    const auto expected = bind(enc.ids().id(0), enc.level_set().level(enc.quantizer().level_index(0, x)));
    EXPECT_EQ(enc.encode(s), expected);
  }
}

TEST(Encoder, MatchesAccumulatorMajority) {
  for (std::size_t features : {2u, 3u, 7u, 30u}) {
    const auto enc = make_encoder(1000, 101, features, 3);
    const auto rows = uniform_matrix(10, features, 77);
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      const auto sample = rows.row(r);
      Accumulator acc(1000);
      for (std::size_t n = 0; n < features; ++n) {
        acc.add(bind(enc.ids().id(n), enc.level_set().level(enc.quantizer().level_index(n, sample[n]))));
      }
      const auto expected = majority(acc, enc.tie_stream(), bytes_hash(sample.data(), sample.size_bytes()));
      ASSERT_EQ(enc.encode(sample), expected) << "features=" << features << " row=" << r;
    }
  }
}

TEST(Encoder, DeterministicAcrossInstances) {
  const auto a = make_encoder(2000, 101, 5, 9);
  const auto b = make_encoder(2000, 101, 5, 9);
  const std::vector<double> s{0.1, 0.2, 0.3, 0.4, 0.5};
  EXPECT_EQ(a.encode(s), b.encode(s));
  EXPECT_EQ(hamming(a.encode(s), a.encode(s)), 0.0);
}

TEST(Encoder, WithinFeatureDistancePreserved) {
  const auto enc = make_encoder(10000, 101, 4);
  const auto& ids = enc.ids();
  const auto& lv = enc.level_set();
  for (std::size_t i : {1u, 20u, 60u}) {
    for (std::size_t j : {1u, 35u, 101u}) {
      const std::size_t gap = i > j ? i - j : j - i;
      EXPECT_EQ(hamming_count(bind(ids.id(2), lv.level(i)), bind(ids.id(2), lv.level(j))), gap * 100);
    }
  }
  const double band = 6 * std::sqrt(0.25 / 10000);
  EXPECT_NEAR(hamming(bind(ids.id(0), lv.level(30)), bind(ids.id(1), lv.level(30))), 0.5, band);
}

TEST(Encoder, InputErrors) {
  const auto enc = make_encoder(1000, 11, 3);
  EXPECT_THROW(enc.encode(std::vector<double>{0.1, 0.2}), InvalidArgument);
  EXPECT_THROW(enc.encode(std::vector<double>{0.1, std::nan(""), 0.2}), DataError);
  EXPECT_THROW(EncoderModel(EncoderConfig{1000, 11, 0}, FeatureQuantizer({{0, 1}}, 21)), ConfigError);
}

TEST(Encoder, BatchMatchesSequential) {
  const auto enc = make_encoder(1000, 11, 3);
  EXPECT_TRUE(enc.encode_batch(Matrix(0, 3)).empty());
  const auto rows = uniform_matrix(5, 3, 4);
  const auto out = enc.encode_batch(rows);
  ASSERT_EQ(out.size(), 5u);
  for (std::size_t r = 0; r < 5; ++r) EXPECT_EQ(out[r], enc.encode(rows.row(r)));
  const auto one = enc.encode_batch(rows.select_rows(std::vector<std::size_t>{2}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], enc.encode(rows.row(2)));
}

TEST(Encoder, BatchErrorNamesRow) {
  const auto enc = make_encoder(1000, 11, 2);
  auto rows = uniform_matrix(4, 2, 5);
  rows(2, 1) = std::numeric_limits<double>::infinity();
  try {
    enc.encode_batch(rows);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
}

TEST(EncoderProperty, NoiseDistanceGrowsWithDelta) {
  const auto enc = make_encoder(10000, 101, 30);
  SeededStream s(55);
  const std::vector<double> deltas{0.0, 0.05, 0.1, 0.2, 0.4};
  std::vector<double> means;
  for (double delta : deltas) {
    double sum = 0.0;
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      std::vector<double> a(30), b(30);
      for (std::size_t n = 0; n < 30; ++n) {
        a[n] = s.uniform();
        b[n] = a[n] + delta * enc.quantizer().range(n) * s.uniform(-1.0, 1.0);
      }
      const double d = hamming(enc.encode(a), enc.encode(b));
      sum += d;
      worst = std::max(worst, d);
    }
    means.push_back(sum / 200);
    if (delta == 0.1) {
      EXPECT_LT(worst, 0.4);
    }
  }
  EXPECT_EQ(means[0], 0.0);
  for (std::size_t i = 1; i < means.size(); ++i) EXPECT_GT(means[i], means[i - 1]) << "delta " << deltas[i];
  EXPECT_LT(means.back(), 0.5);
}
