#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hdcx/encoder.hpp"
#include "hdcx/seeded_stream.hpp"

namespace hdcx::theory {

// Outcome of one Monte Carlo estimator. `passed` is
// |mean - reference| <= tolerance, or mean >= reference - tolerance for
// one-sided checks.
struct TrialReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t dim = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool one_sided = false;
  bool passed = false;
  // Extremes of the per-trial statistic.
  double min = 0.0;
  double max = 0.0;
};

// Deviation of the bundle-to-constituent distance below 1/2 for N odd
// constituents: 2^-N * C(N-1, (N-1)/2), evaluated in exact integer
// arithmetic. Throws InvalidArgument for even N, N == 0 or N > 63.
double p_of_n(std::size_t n);

// Mean over trials of hamming(majority(S_1 + ... + S_N), S_1) for N random
// hypervectors. Reference 1/2 - p_of_n(N).
TrialReport estimate_bundle_distance(std::size_t n, std::size_t dim, std::size_t trials,
                                     const SeededStream& stream, double tolerance = 0.01);

// Fraction of trials where the bundle is strictly closer to a constituent
// than to an independent random probe. Reference 1, one-sided.
TrialReport estimate_bundle_separation(std::size_t n, std::size_t dim, std::size_t trials,
                                       const SeededStream& stream, double tolerance = 0.01);

// Pairs at exact distance d, one side flipped at rate p. Reference
// d(1 - 2p) + p. Throws InvalidArgument unless d * dim is integral.
TrialReport estimate_flip_law(double d, double p, std::size_t dim, std::size_t trials,
                              const SeededStream& stream, double tolerance = 0.01);

// Fraction of trials in which prototype C1 (distance d1 from S) stays
// strictly closer than C2 (distance d2) after both are flipped at rate p.
// Reference 1, one-sided. Throws InvalidArgument when d2 <= d1 or p >= 0.5.
TrialReport estimate_ordering_preservation(double d1, double d2, double p, std::size_t dim, std::size_t trials,
                                           const SeededStream& stream, double tolerance = 0.01);

// hamming(A, B) for independent random pairs. Reference 1/2.
TrialReport estimate_random_pair_distance(std::size_t dim, std::size_t trials, const SeededStream& stream,
                                          double tolerance = 0.005);

// hamming(A, bind(A, B)) for random A, B. Reference 1/2.
TrialReport estimate_bound_distance(std::size_t dim, std::size_t trials, const SeededStream& stream,
                                    double tolerance = 0.005);

struct NoiseCurveConfig {
  EncoderConfig encoder{};
  std::size_t features = 30;
  // Rows of the uniform reference data the quantizer is fit on.
  std::size_t reference_rows = 1000;
};

// For each delta: draw a feature vector uniformly in [0, 1]^d, perturb every
// feature by uniform noise within +-delta * (upper - lower) of the fitted
// quantizer, encode both, and average hamming(S, S'). Reference values are
// 0 at delta == 0 and the previous point elsewhere; `passed` flags that the
// curve has not dropped by more than `tolerance`.
std::vector<TrialReport> estimate_noise_curve(const NoiseCurveConfig& config, const std::vector<double>& deltas,
                                              std::size_t trials, const SeededStream& stream,
                                              double tolerance = 0.005);

// Per-position disagreement frequency of pairs built at exact distance d,
// pooled across pairs, against a Bernoulli(d) model. Returns the
// chi-square statistic over `bins` equal blocks of positions.
struct BernoulliCheck {
  double statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double critical_value = 0.0;  // 5% level
  bool consistent = false;
};
BernoulliCheck check_position_uniformity(double d, std::size_t dim, std::size_t pairs, std::size_t bins,
                                         const SeededStream& stream);

// Random vector at exact Hamming distance round(d * dim) from `base`.
Hypervector at_distance(const Hypervector& base, double d, SeededStream& stream);

}  // namespace hdcx::theory
