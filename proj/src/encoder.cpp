#include "hdcx/encoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "hdcx/errors.hpp"

namespace hdcx {

void validate(const EncoderConfig& config) {
  if (config.dim == 0) throw ConfigError("dimension D must be positive");
  if (config.levels < 2) throw ConfigError("level count M must be at least 2");
  if (config.dim % (config.levels - 1) != 0) {
    throw ConfigError("M - 1 = " + std::to_string(config.levels - 1) + " must divide D = " +
                      std::to_string(config.dim) + " (level count M = " + std::to_string(config.levels) + ")");
  }
}

LevelSet LevelSet::build(SeededStream& stream, std::size_t dim, std::size_t levels) {
  validate(EncoderConfig{dim, levels, 0});
  const std::size_t step = dim / (levels - 1);

  // A uniformly random permutation of positions; level i flips the i-th
  // block of `step` positions, so every position flips at most once.
  std::vector<std::uint32_t> order(dim);
  std::iota(order.begin(), order.end(), 0U);
  for (std::size_t i = dim - 1; i > 0; --i) {
    std::swap(order[i], order[stream.below(i + 1)]);
  }

  LevelSet set;
  set.levels_.reserve(levels);
  set.levels_.push_back(random_hv(stream, dim));
  for (std::size_t m = 1; m < levels; ++m) {
    Hypervector next = set.levels_.back();
    for (std::size_t k = (m - 1) * step; k < m * step; ++k) next.flip(order[k]);
    set.levels_.push_back(std::move(next));
  }
  return set;
}

IdDictionary IdDictionary::build(const SeededStream& stream, std::size_t dim, std::size_t features) {
  IdDictionary dict;
  dict.ids_.reserve(features);
  for (std::size_t n = 0; n < features; ++n) {
    SeededStream sub = stream.derive(std::uint64_t{0}, n);
    dict.ids_.push_back(random_hv(sub, dim));
  }
  return dict;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty range");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

FeatureQuantizer::FeatureQuantizer(std::vector<FeatureBounds> bounds, std::size_t levels)
    : bounds_(std::move(bounds)), levels_(levels) {
  if (levels_ < 2) throw ConfigError("level count M must be at least 2");
  for (std::size_t n = 0; n < bounds_.size(); ++n) {
    const auto& b = bounds_[n];
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || b.lower > b.upper) {
      throw DataError("feature " + std::to_string(n) + ": invalid quantizer bounds");
    }
  }
}

FeatureQuantizer FeatureQuantizer::fit(const Matrix& data, std::size_t levels) {
  if (data.rows() < 2) {
    throw ConfigError("quantizer needs at least 2 samples, got " + std::to_string(data.rows()));
  }
  std::vector<FeatureBounds> bounds(data.cols());
  std::vector<double> column(data.rows());
  for (std::size_t n = 0; n < data.cols(); ++n) {
    for (std::size_t r = 0; r < data.rows(); ++r) {
      const double v = data(r, n);
      if (!std::isfinite(v)) {
        throw DataError("non-finite value at row " + std::to_string(r) + ", feature " + std::to_string(n));
      }
      column[r] = v;
    }
    std::sort(column.begin(), column.end());
    bounds[n] = {quantile_sorted(column, kLowerQuantile), quantile_sorted(column, kUpperQuantile)};
  }
  return FeatureQuantizer(std::move(bounds), levels);
}

std::vector<std::size_t> FeatureQuantizer::degenerate_features() const {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < bounds_.size(); ++n) {
    if (bounds_[n].lower == bounds_[n].upper) out.push_back(n);
  }
  return out;
}

std::size_t FeatureQuantizer::level_index(std::size_t n, double x) const {
  const auto& b = bounds_.at(n);
  if (!std::isfinite(x)) throw DataError("non-finite value for feature " + std::to_string(n));
  if (b.lower == b.upper) return 1;
  if (x < b.lower) return 1;
  if (x >= b.upper) return levels_;
  const double m = static_cast<double>(levels_);
  const double raw = std::floor((x - b.lower) / (b.upper - b.lower) * m + 1.0);
  return static_cast<std::size_t>(std::clamp(raw, 1.0, m));
}

namespace {

LevelSet make_levels(const EncoderConfig& config) {
  validate(config);
  SeededStream stream = SeededStream(config.seed).derive("levels");
  return LevelSet::build(stream, config.dim, config.levels);
}

}  // namespace

EncoderModel::EncoderModel(const EncoderConfig& config, FeatureQuantizer quantizer)
    : config_(config),
      quantizer_(std::move(quantizer)),
      levels_(make_levels(config)),
      ids_(IdDictionary::build(SeededStream(config.seed).derive("ids"), config.dim, quantizer_.features())),
      ties_(SeededStream(config.seed).derive("encode-ties")) {
  if (quantizer_.levels() != config.levels) {
    throw ConfigError("quantizer has " + std::to_string(quantizer_.levels()) + " levels, encoder expects " +
                      std::to_string(config.levels));
  }
  if (quantizer_.features() == 0) throw ConfigError("encoder needs at least one feature");
}

Hypervector EncoderModel::encode(std::span<const double> sample, OpCounter* counter) const {
  if (sample.size() != features()) {
    throw InvalidArgument("sample has " + std::to_string(sample.size()) + " features, encoder expects " +
                          std::to_string(features()));
  }
  const std::size_t words = Hypervector::words_for(dim());
  const std::size_t terms = sample.size();
  const auto planes = static_cast<std::size_t>(std::bit_width(terms));

  // Bit-sliced counters: plane b of word w holds bit b of the number of -1
  // entries seen so far at each of the word's 64 positions.
  std::vector<std::uint64_t> count(words * planes, 0);
  for (std::size_t n = 0; n < terms; ++n) {
    const auto id = ids_.id(n).words();
    const auto level = levels_.level(quantizer_.level_index(n, sample[n])).words();
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t carry = id[w] ^ level[w];
      std::uint64_t* slot = count.data() + w * planes;
      for (std::size_t b = 0; b < planes && carry != 0; ++b) {
        const std::uint64_t t = slot[b];
        slot[b] = t ^ carry;
        carry &= t;
      }
    }
  }
  if (counter != nullptr) counter->xor_words += terms * words;

  // Sum at a position is terms - 2 * negatives.
  const std::uint64_t context = bytes_hash(sample.data(), sample.size_bytes());
  std::vector<std::uint64_t> out(words, 0);
  for (std::size_t w = 0; w < words; ++w) {
    const std::uint64_t* slot = count.data() + w * planes;
    const std::size_t end = std::min(dim() - w * Hypervector::kWordBits, Hypervector::kWordBits);
    std::uint64_t bits = 0;
    for (std::size_t bit = 0; bit < end; ++bit) {
      std::size_t negatives = 0;
      for (std::size_t b = 0; b < planes; ++b) negatives |= ((slot[b] >> bit) & 1U) << b;
      bool negative;
      if (2 * negatives > terms) {
        negative = true;
      } else if (2 * negatives < terms) {
        negative = false;
      } else {
        negative = (ties_.keyed(context, w * Hypervector::kWordBits + bit) & 1U) != 0;
      }
      bits |= static_cast<std::uint64_t>(negative) << bit;
    }
    out[w] = bits;
  }
  return Hypervector::from_words(dim(), std::move(out));
}

std::vector<Hypervector> EncoderModel::encode_batch(const Matrix& data) const {
  if (data.rows() > 0 && data.cols() != features()) {
    throw InvalidArgument("matrix has " + std::to_string(data.cols()) + " columns, encoder expects " +
                          std::to_string(features()));
  }
  std::vector<Hypervector> out;
  out.reserve(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    try {
      out.push_back(encode(data.row(r)));
    } catch (const DataError& e) {
      throw DataError("row " + std::to_string(r) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hdcx
