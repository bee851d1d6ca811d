#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdcx/dataset.hpp"
#include "hdcx/encoder.hpp"
#include "hdcx/model.hpp"
#include "hdcx/model_io.hpp"

namespace hdcx {

struct ExperimentConfig {
  EncoderConfig encoder{};
  TrainConfig train{};
  std::size_t folds = 10;
};

// Fold index for every row. Each class is shuffled with a stream derived
// from `seed` and dealt round-robin; the starting fold rotates by the
// running row count so remainders spread across folds. Per-fold class
// counts differ from n_c / folds by less than one. Throws ConfigError when
// folds < 2 or a class has fewer rows than folds.
std::vector<std::size_t> stratified_folds(std::span<const std::size_t> classes, std::size_t class_count,
                                          std::size_t folds, std::uint64_t seed);

// Fits quantizer, encoder and cluster model on the given rows. Constant
// features are reported through `warnings` when it is non-null.
Classifier fit_classifier(const Matrix& features, std::span<const std::size_t> labels,
                          const std::vector<std::string>& label_names, const std::vector<std::string>& feature_names,
                          const ExperimentConfig& config, std::vector<std::string>* warnings = nullptr);

// Fraction of rows whose predicted class equals the label.
double accuracy(const Classifier& model, const Matrix& features, std::span<const std::size_t> labels);

struct CurvePoint {
  double value = 0.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

struct Timings {
  double train_seconds = 0.0;
  std::size_t inferences = 0;
  double inference_seconds = 0.0;
  std::size_t prototypes = 0;
  std::size_t features = 0;
  std::size_t words_per_vector = 0;
  std::uint64_t xor_words = 0;
  std::uint64_t popcount_words = 0;
  // inferences * (features + prototypes) * words and
  // inferences * prototypes * words respectively.
  std::uint64_t expected_xor_words = 0;
  std::uint64_t expected_popcount_words = 0;
};

struct ExperimentReport {
  std::string experiment;
  ExperimentConfig config{};
  std::size_t rows = 0;
  std::size_t features = 0;
  std::vector<std::string> class_names;
  std::vector<std::size_t> class_counts;

  // Unperturbed k-fold result.
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // sample standard deviation over folds

  std::string knob;  // empty for a plain evaluation
  std::vector<CurvePoint> curve;

  std::optional<Timings> timings;
  std::vector<std::string> warnings;
};

ExperimentReport kfold_evaluate(const Dataset& data, const ExperimentConfig& config);

// Test rows get uniform per-feature noise within +-delta * (upper - lower)
// of the fold's quantizer before encoding. Training data is untouched.
ExperimentReport noise_experiment(const Dataset& data, const std::vector<double>& deltas,
                                  const ExperimentConfig& config);

// Trains each fold on a stratified random subset of its training split.
ExperimentReport subsample_experiment(const Dataset& data, const std::vector<double>& fractions,
                                      const ExperimentConfig& config);

// Flips round(p * D) bits of every stored prototype before testing.
ExperimentReport bitflip_experiment(const Dataset& data, const std::vector<double>& rates,
                                    const ExperimentConfig& config);

enum class SweepAxis { Dim, Clusters, Retrain };

ExperimentReport hyperparam_sweep(const Dataset& data, SweepAxis axis, const std::vector<std::size_t>& values,
                                  const ExperimentConfig& config);

// Times `batch` encode+classify calls (cycling through the rows) and tallies
// XOR/popcount words.
Timings timing_report(const Classifier& model, const Matrix& features, std::size_t batch = 1000);

// Trains on every row (timed), then runs timing_report.
Timings measure_timings(const Dataset& data, const ExperimentConfig& config, std::size_t batch = 1000);

}  // namespace hdcx
