#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdcx/hypervector.hpp"
#include "hdcx/seeded_stream.hpp"

namespace hdcx {

// Un-thresholded bundling sum. Keeping the integer counts (instead of only
// the majority vector) is what makes retraining subtraction possible.
class Accumulator {
 public:
  Accumulator() = default;
  explicit Accumulator(std::size_t dim);

  // Rebuilds an accumulator from stored counts, e.g. when loading a model.
  static Accumulator from_counts(std::vector<std::int32_t> counts, std::int64_t contributions);

  std::size_t dim() const noexcept { return counts_.size(); }
  std::span<const std::int32_t> counts() const noexcept { return counts_; }
  std::int64_t contributions() const noexcept { return contributions_; }

  // counts[i] += sign * hv[i]; contributions += sign. sign must be +1 or -1.
  // Throws OverflowError rather than wrapping.
  void add(const Hypervector& hv, int sign = 1);
  void subtract(const Hypervector& hv) { add(hv, -1); }

  bool operator==(const Accumulator& other) const {
    return counts_ == other.counts_ && contributions_ == other.contributions_;
  }

 private:
  std::vector<std::int32_t> counts_;
  std::int64_t contributions_ = 0;
  // Upper bound on max |counts[i]|; per-entry overflow checks only run once
  // this reaches the int32 limit.
  std::int64_t magnitude_bound_ = 0;
};

// Element-wise sign of the counts. Zero entries take the low bit of
// ties.keyed(context, i), so the result is a pure function of
// (counts, ties.seed(), context).
Hypervector majority(const Accumulator& acc, const SeededStream& ties, std::uint64_t context);

}  // namespace hdcx
