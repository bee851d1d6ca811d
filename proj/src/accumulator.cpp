#include "hdcx/accumulator.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "hdcx/errors.hpp"

namespace hdcx {

namespace {

constexpr std::int64_t kCountLimit = std::numeric_limits<std::int32_t>::max();

}  // namespace

Accumulator::Accumulator(std::size_t dim) : counts_(dim, 0) {
  if (dim == 0) throw InvalidArgument("accumulator dimension must be positive");
}

Accumulator Accumulator::from_counts(std::vector<std::int32_t> counts, std::int64_t contributions) {
  if (counts.empty()) throw InvalidArgument("accumulator dimension must be positive");
  Accumulator acc;
  std::int64_t bound = 0;
  for (auto c : counts) bound = std::max<std::int64_t>(bound, std::llabs(static_cast<long long>(c)));
  acc.counts_ = std::move(counts);
  acc.contributions_ = contributions;
  acc.magnitude_bound_ = bound;
  return acc;
}

void Accumulator::add(const Hypervector& hv, int sign) {
  if (hv.dim() != dim()) {
    throw InvalidArgument("accumulate: dimension mismatch (" + std::to_string(dim()) + " vs " +
                          std::to_string(hv.dim()) + ")");
  }
  if (sign != 1 && sign != -1) throw InvalidArgument("accumulate: sign must be +1 or -1");

  if (magnitude_bound_ >= kCountLimit) {
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      const std::int64_t next = static_cast<std::int64_t>(counts_[i]) + sign * hv[i];
      if (next > kCountLimit || next < -kCountLimit) {
        throw OverflowError("accumulator count at position " + std::to_string(i) + " would overflow");
      }
    }
  }

  const auto words = hv.words();
  const std::size_t d = counts_.size();
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::uint64_t word = words[w];
    const std::size_t base = w * Hypervector::kWordBits;
    const std::size_t end = std::min(d - base, Hypervector::kWordBits);
    std::int32_t* out = counts_.data() + base;
    // Bit 1 is -1, bit 0 is +1: value = 1 - 2 * bit.
    for (std::size_t b = 0; b < end; ++b) {
      out[b] += sign * (1 - 2 * static_cast<std::int32_t>((word >> b) & 1U));
    }
  }
  contributions_ += sign;
  magnitude_bound_ = std::min<std::int64_t>(magnitude_bound_ + 1, kCountLimit);
}

Hypervector majority(const Accumulator& acc, const SeededStream& ties, std::uint64_t context) {
  const auto counts = acc.counts();
  std::vector<std::uint64_t> words(Hypervector::words_for(counts.size()), 0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    bool negative;
    if (counts[i] > 0) {
      negative = false;
    } else if (counts[i] < 0) {
      negative = true;
    } else {
      negative = (ties.keyed(context, i) & 1U) != 0;
    }
    if (negative) words[i / Hypervector::kWordBits] |= std::uint64_t{1} << (i % Hypervector::kWordBits);
  }
  return Hypervector::from_words(counts.size(), std::move(words));
}

}  // namespace hdcx
