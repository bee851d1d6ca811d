#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace hdcx {

// SplitMix64 output finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

// FNV-1a over the bytes of `text`; turns readable context labels into keys.
std::uint64_t label_hash(std::string_view text) noexcept;

// FNV-1a over an arbitrary byte range.
std::uint64_t bytes_hash(const void* data, std::size_t size) noexcept;

// Deterministic pseudo-random stream.
//
// Generator: xoshiro256** with its 256-bit state expanded from the seed by
// SplitMix64. Sub-streams are derived from a (context, index) label:
//
//   h = mix64(seed + 0x9E3779B97F4A7C15)
//   h = mix64(h ^ context)
//   child_seed = mix64(h ^ (index * 0xD1B54A32D192ED03 + 1))
//
// `keyed(context, index)` returns child_seed directly and does not touch the
// stream state, which makes it usable as a pure per-position hash. Every
// step uses fixed-width unsigned arithmetic, so output is identical on all
// platforms.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  SeededStream derive(std::uint64_t context, std::uint64_t index = 0) const noexcept;
  SeededStream derive(std::string_view context, std::uint64_t index = 0) const noexcept {
    return derive(label_hash(context), index);
  }

  std::uint64_t keyed(std::uint64_t context, std::uint64_t index) const noexcept;

  std::uint64_t next() noexcept;

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace hdcx
