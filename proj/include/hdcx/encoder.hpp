#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdcx/accumulator.hpp"
#include "hdcx/hypervector.hpp"
#include "hdcx/matrix.hpp"
#include "hdcx/seeded_stream.hpp"

namespace hdcx {

// Chain of M level hypervectors. Level i+1 is level i with D/(M-1) fresh
// positions flipped, and no position is flipped twice, so
// hamming(level(i), level(j)) == |i - j| / (M - 1) exactly.
class LevelSet {
 public:
  // Throws ConfigError unless M >= 2 and (M - 1) divides D.
  static LevelSet build(SeededStream& stream, std::size_t dim, std::size_t levels);

  std::size_t size() const noexcept { return levels_.size(); }
  std::size_t dim() const noexcept { return levels_.front().dim(); }

  // 1-based, matching level_index().
  const Hypervector& level(std::size_t m) const { return levels_.at(m - 1); }

 private:
  std::vector<Hypervector> levels_;
};

// One random identity hypervector per feature.
class IdDictionary {
 public:
  // ID n is drawn from stream.derive(n), so adding features never changes
  // the earlier ones.
  static IdDictionary build(const SeededStream& stream, std::size_t dim, std::size_t features);

  std::size_t size() const noexcept { return ids_.size(); }
  const Hypervector& id(std::size_t n) const { return ids_.at(n); }

 private:
  std::vector<Hypervector> ids_;
};

struct FeatureBounds {
  double lower = 0.0;  // 2% quantile of the training values
  double upper = 0.0;  // 98% quantile
};

// Linear interpolation between order statistics of an ascending range.
double quantile_sorted(std::span<const double> sorted, double q);

// Maps raw feature values onto levels 1..M. Values below the lower bound go
// to level 1, values at or above the upper bound to level M, and the middle
// range is split into M equal-width intervals.
class FeatureQuantizer {
 public:
  static constexpr double kLowerQuantile = 0.02;
  static constexpr double kUpperQuantile = 0.98;

  FeatureQuantizer() = default;
  FeatureQuantizer(std::vector<FeatureBounds> bounds, std::size_t levels);

  // Throws DataError on non-finite input, ConfigError when rows < 2.
  static FeatureQuantizer fit(const Matrix& data, std::size_t levels);

  std::size_t features() const noexcept { return bounds_.size(); }
  std::size_t levels() const noexcept { return levels_; }
  const FeatureBounds& bounds(std::size_t n) const { return bounds_.at(n); }
  double range(std::size_t n) const { return bounds_.at(n).upper - bounds_.at(n).lower; }

  // Features whose bounds coincide; they always map to level 1.
  std::vector<std::size_t> degenerate_features() const;

  std::size_t level_index(std::size_t n, double x) const;

 private:
  std::vector<FeatureBounds> bounds_;
  std::size_t levels_ = 0;
};

struct EncoderConfig {
  std::size_t dim = 10000;
  std::size_t levels = 101;
  std::uint64_t seed = 0;
};

// Throws ConfigError for a non-positive D, M < 2, or (M - 1) not dividing D.
void validate(const EncoderConfig& config);

// ID/level dictionaries plus the quantizer. Immutable once built; the
// dictionaries are regenerated from the seed, never stored.
class EncoderModel {
 public:
  EncoderModel(const EncoderConfig& config, FeatureQuantizer quantizer);

  const EncoderConfig& config() const noexcept { return config_; }
  std::size_t dim() const noexcept { return config_.dim; }
  std::size_t features() const noexcept { return quantizer_.features(); }
  const FeatureQuantizer& quantizer() const noexcept { return quantizer_; }
  const LevelSet& level_set() const noexcept { return levels_; }
  const IdDictionary& ids() const noexcept { return ids_; }
  const SeededStream& tie_stream() const noexcept { return ties_; }

  // Majority over bind(ID_n, L_level(n, s_n)), equal to bundling the terms
  // in an Accumulator and calling majority(acc, tie_stream(), h) with h the
  // FNV-1a hash of the sample bytes. Counting is done on bit-sliced words.
  Hypervector encode(std::span<const double> sample, OpCounter* counter = nullptr) const;

  // Row-wise encode; errors carry the row index.
  std::vector<Hypervector> encode_batch(const Matrix& data) const;

 private:
  EncoderConfig config_;
  FeatureQuantizer quantizer_;
  LevelSet levels_;
  IdDictionary ids_;
  SeededStream ties_;
};

}  // namespace hdcx
