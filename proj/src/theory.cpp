#include "hdcx/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdcx/accumulator.hpp"
#include "hdcx/errors.hpp"
#include "hdcx/hypervector.hpp"

namespace hdcx::theory {

namespace {

// Running mean/variance (Welford) plus extremes.
class Stats {
 public:
  void push(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
    min_ = n_ == 1 ? x : std::min(min_, x);
    max_ = n_ == 1 ? x : std::max(max_, x);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double stddev() const { return n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1)) : 0.0; }
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

TrialReport finish(std::string name, std::size_t dim, const Stats& stats, double reference, double tolerance,
                   bool one_sided) {
  TrialReport r;
  r.name = std::move(name);
  r.trials = stats.count();
  r.dim = dim;
  r.mean = stats.mean();
  r.stddev = stats.stddev();
  r.min = stats.min();
  r.max = stats.max();
  r.reference = reference;
  r.tolerance = tolerance;
  r.one_sided = one_sided;
  r.passed = one_sided ? r.mean >= reference - tolerance : std::abs(r.mean - reference) <= tolerance;
  return r;
}

void require_trials(std::size_t trials) {
  if (trials == 0) throw InvalidArgument("estimators need at least one trial");
}

void require_odd(std::size_t n) {
  if (n == 0 || n % 2 == 0) throw InvalidArgument("bundle size N must be odd, got " + std::to_string(n));
}

Hypervector bundle_of(const std::vector<Hypervector>& parts, const SeededStream& ties) {
  Accumulator acc(parts.front().dim());
  for (const auto& p : parts) acc.add(p);
  return majority(acc, ties, 0);
}

std::string fmt(double x) {
  std::string s = std::to_string(x);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

double p_of_n(std::size_t n) {
  require_odd(n);
  if (n > 63) throw InvalidArgument("p(N) is evaluated exactly only for N <= 63");
  // C(m, r) built incrementally; each intermediate is itself a binomial
  // coefficient, so the division is exact.
  const std::uint64_t m = n - 1;
  const std::uint64_t r = m / 2;
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) c = c * (m - r + i) / i;
  return std::ldexp(static_cast<double>(c), -static_cast<int>(n));
}

Hypervector at_distance(const Hypervector& base, double d, SeededStream& stream) {
  return flip_bits(base, d, stream);
}

TrialReport estimate_bundle_distance(std::size_t n, std::size_t dim, std::size_t trials,
                                     const SeededStream& stream, double tolerance) {
  require_odd(n);
  require_trials(trials);
  Stats stats;
  for (std::size_t t = 0; t < trials; ++t) {
    SeededStream s = stream.derive("bundle-distance", t);
    std::vector<Hypervector> parts;
    for (std::size_t i = 0; i < n; ++i) parts.push_back(random_hv(s, dim));
    stats.push(hamming(bundle_of(parts, s.derive("ties")), parts.front()));
  }
  return finish("bundle_distance_N" + std::to_string(n), dim, stats, 0.5 - p_of_n(n), tolerance, false);
}

TrialReport estimate_bundle_separation(std::size_t n, std::size_t dim, std::size_t trials,
                                       const SeededStream& stream, double tolerance) {
  require_odd(n);
  require_trials(trials);
  Stats stats;
  for (std::size_t t = 0; t < trials; ++t) {
    SeededStream s = stream.derive("bundle-separation", t);
    std::vector<Hypervector> parts;
    for (std::size_t i = 0; i < n; ++i) parts.push_back(random_hv(s, dim));
    const Hypervector probe = random_hv(s, dim);
    const Hypervector c = bundle_of(parts, s.derive("ties"));
    stats.push(hamming_count(c, parts.front()) < hamming_count(c, probe) ? 1.0 : 0.0);
  }
  return finish("bundle_separation_N" + std::to_string(n), dim, stats, 1.0, tolerance, true);
}

TrialReport estimate_flip_law(double d, double p, std::size_t dim, std::size_t trials,
                              const SeededStream& stream, double tolerance) {
  require_trials(trials);
  if (!(d >= 0.0 && d <= 1.0)) throw InvalidArgument("initial distance must lie in [0, 1]");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("flip rate must lie in [0, 1]");
  const double scaled = d * static_cast<double>(dim);
  if (std::abs(scaled - std::round(scaled)) > 1e-9) {
    throw InvalidArgument("d * D = " + fmt(scaled) + " is not an integer");
  }
  Stats stats;
  for (std::size_t t = 0; t < trials; ++t) {
    SeededStream s = stream.derive("flip-law", t);
    const Hypervector a = random_hv(s, dim);
    const Hypervector c = at_distance(a, d, s);
    stats.push(hamming(a, flip_bits(c, p, s)));
  }
  return finish("flip_law_d" + fmt(d) + "_p" + fmt(p), dim, stats, d * (1.0 - 2.0 * p) + p, tolerance, false);
}

TrialReport estimate_ordering_preservation(double d1, double d2, double p, std::size_t dim, std::size_t trials,
                                           const SeededStream& stream, double tolerance) {
  require_trials(trials);
  if (!(d2 > d1)) throw InvalidArgument("ordering check needs d2 > d1");
  if (!(p >= 0.0 && p < 0.5)) throw InvalidArgument("ordering check needs 0 <= p < 0.5");
  Stats stats;
  for (std::size_t t = 0; t < trials; ++t) {
    SeededStream s = stream.derive("ordering", t);
    const Hypervector sample = random_hv(s, dim);
    const Hypervector c1 = flip_bits(at_distance(sample, d1, s), p, s);
    const Hypervector c2 = flip_bits(at_distance(sample, d2, s), p, s);
    stats.push(hamming_count(sample, c1) < hamming_count(sample, c2) ? 1.0 : 0.0);
  }
  return finish("ordering_d" + fmt(d1) + "_d" + fmt(d2) + "_p" + fmt(p), dim, stats, 1.0, tolerance, true);
}

TrialReport estimate_random_pair_distance(std::size_t dim, std::size_t trials, const SeededStream& stream,
                                          double tolerance) {
  require_trials(trials);
  Stats stats;
  for (std::size_t t = 0; t < trials; ++t) {
    SeededStream a = stream.derive("pair-a", t);
    SeededStream b = stream.derive("pair-b", t);
    stats.push(hamming(random_hv(a, dim), random_hv(b, dim)));
  }
  return finish("random_pair_distance", dim, stats, 0.5, tolerance, false);
}

TrialReport estimate_bound_distance(std::size_t dim, std::size_t trials, const SeededStream& stream,
                                    double tolerance) {
  require_trials(trials);
  Stats stats;
  for (std::size_t t = 0; t < trials; ++t) {
    SeededStream s = stream.derive("bound-distance", t);
    const Hypervector a = random_hv(s, dim);
    const Hypervector b = random_hv(s, dim);
    stats.push(hamming(a, bind(a, b)));
  }
  return finish("bound_distance", dim, stats, 0.5, tolerance, false);
}

std::vector<TrialReport> estimate_noise_curve(const NoiseCurveConfig& config, const std::vector<double>& deltas,
                                              std::size_t trials, const SeededStream& stream, double tolerance) {
  require_trials(trials);
  for (double delta : deltas) {
    if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgument("noise ratio must lie in [0, 1]");
  }
  SeededStream data_stream = stream.derive("noise-reference");
  Matrix reference(config.reference_rows, config.features);
  for (std::size_t r = 0; r < reference.rows(); ++r) {
    for (auto& v : reference.row(r)) v = data_stream.uniform();
  }
  const EncoderModel encoder(config.encoder, FeatureQuantizer::fit(reference, config.encoder.levels));

  std::vector<TrialReport> out;
  double previous = 0.0;
  std::vector<double> sample(config.features);
  std::vector<double> noisy(config.features);
  for (std::size_t idx = 0; idx < deltas.size(); ++idx) {
    const double delta = deltas[idx];
    Stats stats;
    for (std::size_t t = 0; t < trials; ++t) {
      SeededStream s = stream.derive("noise-trial", t);
      SeededStream noise = s.derive("noise", idx);
      for (std::size_t n = 0; n < config.features; ++n) {
        sample[n] = s.uniform();
        const double span = delta * encoder.quantizer().range(n);
        noisy[n] = delta == 0.0 ? sample[n] : sample[n] + noise.uniform(-span, span);
      }
      stats.push(hamming(encoder.encode(sample), encoder.encode(noisy)));
    }
    const bool at_zero = delta == 0.0;
    TrialReport r = finish("noise_curve_delta" + fmt(delta), config.encoder.dim, stats, at_zero ? 0.0 : previous,
                           at_zero ? 0.0 : tolerance, !at_zero);
    previous = r.mean;
    out.push_back(std::move(r));
  }
  return out;
}

BernoulliCheck check_position_uniformity(double d, std::size_t dim, std::size_t pairs, std::size_t bins,
                                         const SeededStream& stream) {
  if (bins < 2 || dim % bins != 0) throw InvalidArgument("bins must be >= 2 and divide the dimension");
  require_trials(pairs);
  std::vector<double> observed(bins, 0.0);
  const std::size_t width = dim / bins;
  for (std::size_t t = 0; t < pairs; ++t) {
    SeededStream s = stream.derive("uniformity", t);
    const Hypervector a = random_hv(s, dim);
    const Hypervector b = at_distance(a, d, s);
    for (std::size_t i = 0; i < dim; ++i) {
      if (a.is_negative(i) != b.is_negative(i)) observed[i / width] += 1.0;
    }
  }
  const double expected =
      static_cast<double>(flip_count(d, dim)) * static_cast<double>(pairs) / static_cast<double>(bins);
  BernoulliCheck check;
  for (double o : observed) check.statistic += (o - expected) * (o - expected) / expected;
  check.degrees_of_freedom = bins - 1;
  // Wilson-Hilferty approximation of the 95th percentile.
  const double k = static_cast<double>(check.degrees_of_freedom);
  const double z = 1.6448536269514722;
  const double term = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  check.critical_value = k * term * term * term;
  check.consistent = check.statistic <= check.critical_value;
  return check;
}

}  // namespace hdcx::theory
