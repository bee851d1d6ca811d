#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdcx/seeded_stream.hpp"

namespace hdcx {

// Word-level operation tally used as an energy proxy for inference.
struct OpCounter {
  std::uint64_t xor_words = 0;
  std::uint64_t popcount_words = 0;
};

// Bipolar hypervector of dimension D, packed 64 entries per word.
// A stored 1 bit is the value -1 and a stored 0 bit is +1, so binding is
// XOR and Hamming distance is popcount(XOR). Padding bits past D are zero.
class Hypervector {
 public:
  static constexpr std::size_t kWordBits = 64;

  Hypervector() = default;

  // All-(+1) vector. Throws InvalidArgument for dim == 0.
  explicit Hypervector(std::size_t dim);

  static Hypervector from_bipolar(std::span<const int> values);
  // Throws InvalidArgument when the word count is wrong or padding is set.
  static Hypervector from_words(std::size_t dim, std::vector<std::uint64_t> words);

  static constexpr std::size_t words_for(std::size_t dim) noexcept {
    return (dim + kWordBits - 1) / kWordBits;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool is_negative(std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  int operator[](std::size_t i) const noexcept { return is_negative(i) ? -1 : 1; }

  void set(std::size_t i, int value);
  void flip(std::size_t i) noexcept { words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits); }

  std::vector<int> to_bipolar() const;
  std::size_t count_negative() const noexcept;

  // In-place binding.
  Hypervector& operator^=(const Hypervector& other);

  bool operator==(const Hypervector&) const = default;

 private:
  Hypervector(std::size_t dim, std::vector<std::uint64_t> words) : dim_(dim), words_(std::move(words)) {}
  void clear_padding() noexcept;

  std::size_t dim_ = 0;
  std::vector<std::uint64_t> words_;

  friend Hypervector random_hv(SeededStream& stream, std::size_t dim);
};

// Each entry independently +1 or -1 with probability 1/2.
Hypervector random_hv(SeededStream& stream, std::size_t dim);

// Element-wise product; XOR of the packed words.
Hypervector bind(const Hypervector& a, const Hypervector& b, OpCounter* counter = nullptr);

Hypervector negate(const Hypervector& a);

// Number of differing positions.
std::size_t hamming_count(const Hypervector& a, const Hypervector& b, OpCounter* counter = nullptr);

// Fraction of differing positions, in [0, 1].
double hamming(const Hypervector& a, const Hypervector& b, OpCounter* counter = nullptr);

// round(p * dim), the number of positions flip_bits negates.
std::size_t flip_count(double p, std::size_t dim);

// Negates exactly round(p * D) distinct positions chosen uniformly without
// replacement. Throws InvalidArgument unless 0 <= p <= 1.
Hypervector flip_bits(const Hypervector& hv, double p, SeededStream& stream);

}  // namespace hdcx
