#include "hdcx/hypervector.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "hdcx/errors.hpp"

namespace hdcx {

namespace {

void require_same_dim(const Hypervector& a, const Hypervector& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

Hypervector::Hypervector(std::size_t dim) : dim_(dim), words_(words_for(dim), 0) {
  if (dim == 0) throw InvalidArgument("hypervector dimension must be positive");
}

Hypervector Hypervector::from_bipolar(std::span<const int> values) {
  Hypervector hv(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) hv.set(i, values[i]);
  return hv;
}

Hypervector Hypervector::from_words(std::size_t dim, std::vector<std::uint64_t> words) {
  if (dim == 0) throw InvalidArgument("hypervector dimension must be positive");
  if (words.size() != words_for(dim)) {
    throw InvalidArgument("word count " + std::to_string(words.size()) + " does not match dimension " +
                          std::to_string(dim));
  }
  const std::size_t tail = dim % kWordBits;
  if (tail != 0 && (words.back() >> tail) != 0) {
    throw InvalidArgument("padding bits beyond the dimension are set");
  }
  return Hypervector(dim, std::move(words));
}

void Hypervector::set(std::size_t i, int value) {
  if (value != 1 && value != -1) throw InvalidArgument("bipolar entries must be +1 or -1");
  const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
  if (value == -1) {
    words_[i / kWordBits] |= mask;
  } else {
    words_[i / kWordBits] &= ~mask;
  }
}

std::vector<int> Hypervector::to_bipolar() const {
  std::vector<int> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = (*this)[i];
  return out;
}

std::size_t Hypervector::count_negative() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

Hypervector& Hypervector::operator^=(const Hypervector& other) {
  require_same_dim(*this, other, "bind");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

void Hypervector::clear_padding() noexcept {
  const std::size_t tail = dim_ % kWordBits;
  if (tail != 0) words_.back() &= (std::uint64_t{1} << tail) - 1;
}

Hypervector random_hv(SeededStream& stream, std::size_t dim) {
  Hypervector hv(dim);
  for (auto& w : hv.words_) w = stream.next();
  hv.clear_padding();
  return hv;
}

Hypervector bind(const Hypervector& a, const Hypervector& b, OpCounter* counter) {
  Hypervector out = a;
  out ^= b;
  if (counter != nullptr) counter->xor_words += a.word_count();
  return out;
}

Hypervector negate(const Hypervector& a) {
  Hypervector out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out.flip(i);
  return out;
}

std::size_t hamming_count(const Hypervector& a, const Hypervector& b, OpCounter* counter) {
  require_same_dim(a, b, "hamming");
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t total = 0;
  for (std::size_t w = 0; w < wa.size(); ++w) total += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
  if (counter != nullptr) {
    counter->xor_words += wa.size();
    counter->popcount_words += wa.size();
  }
  return total;
}

double hamming(const Hypervector& a, const Hypervector& b, OpCounter* counter) {
  return static_cast<double>(hamming_count(a, b, counter)) / static_cast<double>(a.dim());
}

std::size_t flip_count(double p, std::size_t dim) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("flip rate must lie in [0, 1]");
  return static_cast<std::size_t>(std::llround(p * static_cast<double>(dim)));
}

Hypervector flip_bits(const Hypervector& hv, double p, SeededStream& stream) {
  const std::size_t flips = flip_count(p, hv.dim());
  Hypervector out = hv;
  if (flips == 0) return out;
  if (flips == hv.dim()) return negate(hv);
  // Partial Fisher-Yates: the first `flips` slots are a uniform sample.
  std::vector<std::uint32_t> positions(hv.dim());
  std::iota(positions.begin(), positions.end(), 0U);
  for (std::size_t i = 0; i < flips; ++i) {
    const std::size_t j = i + stream.below(hv.dim() - i);
    std::swap(positions[i], positions[j]);
    out.flip(positions[i]);
  }
  return out;
}

}  // namespace hdcx
