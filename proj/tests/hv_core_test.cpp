#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "hdcx/accumulator.hpp"
#include "hdcx/errors.hpp"
#include "hdcx/hypervector.hpp"
#include "hdcx/seeded_stream.hpp"

using namespace hdcx;

namespace {

// Plain bipolar reference: element-wise product and disagreement count.
std::vector<int> ref_bind(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

std::size_t ref_hamming(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

}  // namespace

TEST(SeededStream, SameSeedSameSequence) {
  SeededStream a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(SeededStream, DeriveIsPureAndLabelSensitive) {
  const SeededStream root(7);
  EXPECT_EQ(root.derive("levels").seed(), root.derive("levels").seed());
  EXPECT_NE(root.derive("levels").seed(), root.derive("ids").seed());
  EXPECT_NE(root.derive(1, 0).seed(), root.derive(1, 1).seed());
  EXPECT_EQ(root.derive("ids").seed(), root.derive(label_hash("ids")).seed());
  EXPECT_EQ(root.keyed(5, 9), root.derive(5, 9).seed());
}

TEST(SeededStream, BelowStaysInRangeAndCoversIt) {
  SeededStream s(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = s.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(SeededStream, UniformInUnitInterval) {
  SeededStream s(3);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(Hypervector, BipolarRoundTripAndPadding) {
  const std::vector<int> v{1, -1, -1, 1, -1};
  const auto hv = Hypervector::from_bipolar(v);
  EXPECT_EQ(hv.dim(), 5u);
  EXPECT_EQ(hv.to_bipolar(), v);
  EXPECT_EQ(hv.count_negative(), 3u);
  EXPECT_EQ(hv.words()[0], 0b10110u);
  EXPECT_THROW(Hypervector::from_words(5, {std::uint64_t{1} << 5}), InvalidArgument);
  EXPECT_THROW(Hypervector::from_words(5, {0, 0}), InvalidArgument);
  EXPECT_THROW(Hypervector(0), InvalidArgument);
}

TEST(Hypervector, RandomIsDeterministicAndPaddingClear) {
  SeededStream a(11), b(11);
  const auto x = random_hv(a, 100);
  const auto y = random_hv(b, 100);
  EXPECT_EQ(x, y);
  EXPECT_EQ(x.words()[1] >> 36, 0u);
}

TEST(Hypervector, BindMatchesElementwiseProduct) {
  const std::vector<int> a{1, -1, 1, -1}, b{1, 1, -1, -1};
  const auto c = bind(Hypervector::from_bipolar(a), Hypervector::from_bipolar(b));
  EXPECT_EQ(c.to_bipolar(), (std::vector<int>{1, -1, -1, 1}));
  EXPECT_THROW(bind(Hypervector(4), Hypervector(5)), InvalidArgument);
}

TEST(Hypervector, PackedOpsMatchReferenceOnRandomVectors) {
  SeededStream s(5);
  for (std::size_t dim : {1u, 63u, 64u, 65u, 257u, 1000u}) {
    const auto a = random_hv(s, dim), b = random_hv(s, dim);
    const auto ra = a.to_bipolar(), rb = b.to_bipolar();
    EXPECT_EQ(bind(a, b).to_bipolar(), ref_bind(ra, rb));
    EXPECT_EQ(hamming_count(a, b), ref_hamming(ra, rb));
    EXPECT_DOUBLE_EQ(hamming(a, b), static_cast<double>(ref_hamming(ra, rb)) / dim);
  }
}

TEST(HypervectorProperty, BindInvolution) {
  SeededStream s(21);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_hv(s, 333), b = random_hv(s, 333);
    ASSERT_EQ(bind(bind(a, b), b), a);
  }
}

TEST(HypervectorProperty, HammingIsAMetric) {
  SeededStream s(22);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_hv(s, 200), b = random_hv(s, 200), c = random_hv(s, 200);
    ASSERT_EQ(hamming_count(a, a), 0u);
    ASSERT_EQ(hamming_count(a, b), hamming_count(b, a));
    ASSERT_LE(hamming_count(a, c), hamming_count(a, b) + hamming_count(b, c));
  }
}

TEST(HypervectorProperty, BindDistanceIdentitiesExact) {
  SeededStream s(23);
  const std::size_t dim = 256;
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_hv(s, dim), b = random_hv(s, dim), c = random_hv(s, dim);
    ASSERT_EQ(hamming_count(a, bind(a, b)), b.count_negative());
    ASSERT_EQ(hamming_count(bind(a, b), bind(c, b)), hamming_count(a, c));
  }
}

TEST(Hypervector, NegateIsFullDistance) {
  SeededStream s(2);
  const auto a = random_hv(s, 130);
  EXPECT_DOUBLE_EQ(hamming(a, negate(a)), 1.0);
}

TEST(Hypervector, OpCounterTalliesWords) {
  SeededStream s(2);
  const auto a = random_hv(s, 10000), b = random_hv(s, 10000);
  OpCounter ops;
  bind(a, b, &ops);
  EXPECT_EQ(ops.xor_words, 157u);
  EXPECT_EQ(ops.popcount_words, 0u);
  hamming(a, b, &ops);
  EXPECT_EQ(ops.xor_words, 314u);
  EXPECT_EQ(ops.popcount_words, 157u);
}

TEST(FlipBits, ZeroAndOne) {
  SeededStream s(9);
  const auto a = random_hv(s, 1000);
  EXPECT_EQ(flip_bits(a, 0.0, s), a);
  EXPECT_DOUBLE_EQ(hamming(a, flip_bits(a, 1.0, s)), 1.0);
}

TEST(FlipBits, ExactCountAndRangeCheck) {
  SeededStream s(9);
  const auto a = random_hv(s, 999);
  for (double p : {0.1, 0.25, 0.5, 0.77}) {
    EXPECT_EQ(hamming_count(a, flip_bits(a, p, s)), flip_count(p, 999));
  }
  EXPECT_EQ(flip_count(0.2, 10000), 2000u);
  EXPECT_EQ(flip_count(0.5, 5), 3u);
  EXPECT_THROW(flip_bits(a, -0.01, s), InvalidArgument);
  EXPECT_THROW(flip_bits(a, 1.01, s), InvalidArgument);
}

TEST(FlipBits, PositionsAreUniform) {
  SeededStream s(10);
  const Hypervector zero(50);
  std::vector<int> hits(50, 0);
  for (int t = 0; t < 5000; ++t) {
    const auto f = flip_bits(zero, 0.1, s);
    for (std::size_t i = 0; i < 50; ++i) hits[i] += f.is_negative(i);
  }
  // 500 expected per position, sd about 21
  for (int h : hits) EXPECT_NEAR(h, 500, 110);
}

TEST(FlipBits, DistanceLawAtPointOne) {
  SeededStream s(12);
  const std::size_t dim = 10000;
  double sum = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_hv(s, dim);
    const auto c = flip_bits(a, 0.2, s);
    sum += hamming(a, flip_bits(c, 0.1, s));
  }
  EXPECT_NEAR(sum / 1000, 0.26, 0.01);
}

TEST(FlipBitsProperty, DistanceLawConcentrates) {
  SeededStream s(13);
  const std::size_t dim = 10000;
  const double band = 3 * std::sqrt(0.25 / dim);
  for (double d : {0.1, 0.3}) {
    for (double p : {0.05, 0.2, 0.4}) {
      double sum = 0;
      for (int t = 0; t < 100; ++t) {
        const auto a = random_hv(s, dim);
        const auto c = flip_bits(a, d, s);
        sum += hamming(a, flip_bits(c, p, s));
      }
      EXPECT_NEAR(sum / 100, d * (1 - 2 * p) + p, band) << "d=" << d << " p=" << p;
    }
  }
}

TEST(Accumulator, AddSubtractAndContributions) {
  const auto a = Hypervector::from_bipolar(std::vector<int>{1, -1, 1});
  const auto b = Hypervector::from_bipolar(std::vector<int>{-1, -1, 1});
  Accumulator acc(3);
  acc.add(a);
  acc.add(b);
  EXPECT_EQ(std::vector<std::int32_t>(acc.counts().begin(), acc.counts().end()),
            (std::vector<std::int32_t>{0, -2, 2}));
  EXPECT_EQ(acc.contributions(), 2);
  acc.subtract(b);
  EXPECT_EQ(std::vector<std::int32_t>(acc.counts().begin(), acc.counts().end()),
            (std::vector<std::int32_t>{1, -1, 1}));
  EXPECT_EQ(acc.contributions(), 1);
  EXPECT_THROW(acc.add(Hypervector(4)), InvalidArgument);
  EXPECT_THROW(acc.add(a, 2), InvalidArgument);
}

TEST(Accumulator, OverflowIsAnError) {
  const auto a = Hypervector::from_bipolar(std::vector<int>{1, -1});
  auto acc = Accumulator::from_counts({std::numeric_limits<std::int32_t>::max() - 1, 0}, 0);
  acc.add(a);
  EXPECT_EQ(acc.counts()[0], std::numeric_limits<std::int32_t>::max());
  EXPECT_THROW(acc.add(a), OverflowError);
  auto low = Accumulator::from_counts({0, std::numeric_limits<std::int32_t>::min()}, 0);
  EXPECT_THROW(low.add(a), OverflowError);
}

TEST(Majority, SingleVectorIsItself) {
  SeededStream s(4);
  const SeededStream ties(99);
  const auto a = random_hv(s, 777);
  Accumulator acc(777);
  acc.add(a);
  EXPECT_EQ(majority(acc, ties, 0), a);
}

TEST(Majority, SignOfCounts) {
  const SeededStream ties(99);
  const auto acc = Accumulator::from_counts({1, -1}, 0);
  EXPECT_EQ(majority(acc, ties, 0).to_bipolar(), (std::vector<int>{1, -1}));
}

TEST(Majority, TiesAreKeyedAndReproducible) {
  const auto acc = Accumulator::from_counts(std::vector<std::int32_t>(500, 0), 0);
  const SeededStream ties(99);
  const auto x = majority(acc, ties, 17);
  EXPECT_EQ(x, majority(acc, SeededStream(99), 17));
  EXPECT_NE(x, majority(acc, ties, 18));
  EXPECT_NE(x, majority(acc, SeededStream(100), 17));
  for (std::size_t i = 0; i < 500; ++i) {
    EXPECT_EQ(x.is_negative(i), (ties.keyed(17, i) & 1U) != 0);
  }
  // Roughly balanced.
  EXPECT_NEAR(static_cast<double>(x.count_negative()), 250.0, 60.0);
}

TEST(MajorityProperty, OddCopiesGiveTheVector) {
  SeededStream s(30);
  const SeededStream ties(1);
  for (int n : {1, 3, 5, 7, 9}) {
    const auto a = random_hv(s, 1234);
    Accumulator acc(1234);
    for (int i = 0; i < n; ++i) acc.add(a);
    ASSERT_EQ(majority(acc, ties, 3), a);
  }
}

TEST(MajorityProperty, MatchesReferenceVote) {
  SeededStream s(31);
  const SeededStream ties(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::vector<int>> terms;
    Accumulator acc(100);
    for (int n = 0; n < 4; ++n) {
      const auto hv = random_hv(s, 100);
      terms.push_back(hv.to_bipolar());
      acc.add(hv);
    }
    const auto m = majority(acc, ties, t).to_bipolar();
    for (std::size_t i = 0; i < 100; ++i) {
      int sum = 0;
      for (const auto& v : terms) sum += v[i];
      const int expected = sum > 0 ? 1 : sum < 0 ? -1 : ((ties.keyed(t, i) & 1U) ? -1 : 1);
      ASSERT_EQ(m[i], expected);
    }
  }
}
