#include "hdcx/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "hdcx/errors.hpp"
#include "hdcx/seeded_stream.hpp"

namespace hdcx {

namespace {

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct Prepared {
  LabelEncoding labels;
  std::vector<std::size_t> fold_of;
};

void validate(const ExperimentConfig& config) {
  validate(config.encoder);
  validate(config.train);
  if (config.folds < 2) throw ConfigError("fold count must be at least 2");
}

Prepared prepare(const Dataset& data, const ExperimentConfig& config) {
  validate(config);
  require_trainable(data);
  Prepared p{encode_labels(data.labels), {}};
  p.fold_of = stratified_folds(p.labels.index, p.labels.names.size(), config.folds, config.encoder.seed);
  return p;
}

Split split_fold(const std::vector<std::size_t>& fold_of, std::size_t fold) {
  Split s;
  for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == fold ? s.test : s.train).push_back(i);
  return s;
}

std::vector<std::size_t> pick(const std::vector<std::size_t>& values, const std::vector<std::size_t>& rows) {
  std::vector<std::size_t> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(values[r]);
  return out;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

ExperimentReport start_report(std::string name, const Dataset& data, const ExperimentConfig& config,
                              const Prepared& prep) {
  ExperimentReport r;
  r.experiment = std::move(name);
  r.config = config;
  r.rows = data.rows();
  r.features = data.features.cols();
  r.class_names = prep.labels.names;
  r.class_counts.assign(prep.labels.names.size(), 0);
  for (auto c : prep.labels.index) ++r.class_counts[c];
  return r;
}

void set_baseline(ExperimentReport& r, std::vector<double> folds) {
  r.mean_accuracy = mean_of(folds);
  r.std_accuracy = sample_std(folds);
  r.fold_accuracies = std::move(folds);
}

CurvePoint make_point(double value, std::vector<double> folds) {
  CurvePoint p;
  p.value = value;
  p.mean_accuracy = mean_of(folds);
  p.std_accuracy = sample_std(folds);
  p.fold_accuracies = std::move(folds);
  return p;
}

void add_warnings(std::vector<std::string>& into, std::vector<std::string> fresh) {
  for (auto& w : fresh) {
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(std::move(w));
  }
}

struct FoldModel {
  Classifier classifier;
  Matrix test_x;
  std::vector<std::size_t> test_y;
};

FoldModel fit_fold(const Dataset& data, const Prepared& prep, const Split& split, const ExperimentConfig& config,
                   std::vector<std::string>& warnings) {
  std::vector<std::string> fresh;
  Classifier c = fit_classifier(data.features.select_rows(split.train), pick(prep.labels.index, split.train),
                                prep.labels.names, data.feature_names, config, &fresh);
  add_warnings(warnings, std::move(fresh));
  return FoldModel{std::move(c), data.features.select_rows(split.test), pick(prep.labels.index, split.test)};
}

void require_unit_interval(const std::vector<double>& values, const char* what, bool open_below) {
  for (double v : values) {
    const bool ok = open_below ? (v > 0.0 && v <= 1.0) : (v >= 0.0 && v <= 1.0);
    if (!ok) throw ConfigError(std::string(what) + " value " + std::to_string(v) + " is out of range");
  }
}

}  // namespace

std::vector<std::size_t> stratified_folds(std::span<const std::size_t> classes, std::size_t class_count,
                                          std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("fold count must be at least 2");
  std::vector<std::vector<std::size_t>> rows(class_count);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] >= class_count) throw InvalidArgument("class index out of range");
    rows[classes[i]].push_back(i);
  }
  const SeededStream root = SeededStream(seed).derive("folds");
  std::vector<std::size_t> fold_of(classes.size(), 0);
  std::size_t offset = 0;
  for (std::size_t c = 0; c < class_count; ++c) {
    auto& idx = rows[c];
    if (idx.size() < folds) {
      throw ConfigError("class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                        " rows, fewer than the " + std::to_string(folds) + " folds requested");
    }
    SeededStream s = root.derive(std::uint64_t{0}, c);
    for (std::size_t i = idx.size() - 1; i > 0; --i) std::swap(idx[i], idx[s.below(i + 1)]);
    for (std::size_t r = 0; r < idx.size(); ++r) fold_of[idx[r]] = (offset + r) % folds;
    offset = (offset + idx.size()) % folds;
  }
  return fold_of;
}

Classifier fit_classifier(const Matrix& features, std::span<const std::size_t> labels,
                          const std::vector<std::string>& label_names, const std::vector<std::string>& feature_names,
                          const ExperimentConfig& config, std::vector<std::string>* warnings) {
  FeatureQuantizer quantizer = FeatureQuantizer::fit(features, config.encoder.levels);
  if (warnings != nullptr) {
    for (auto n : quantizer.degenerate_features()) {
      const std::string name = n < feature_names.size() ? feature_names[n] : std::to_string(n);
      warnings->push_back("feature '" + name + "' has equal 2% and 98% quantiles in training data; mapped to level 1");
    }
  }
  EncoderModel encoder(config.encoder, std::move(quantizer));
  TrainingSet set;
  set.samples = encoder.encode_batch(features);
  set.labels.assign(labels.begin(), labels.end());
  set.label_names = label_names;
  TrainConfig train_config = config.train;
  ClusterModel model = train(set, train_config);
  return Classifier{std::move(encoder), std::move(model), feature_names, config.train.clusters, kToolVersion};
}

double accuracy(const Classifier& model, const Matrix& features, std::span<const std::size_t> labels) {
  if (features.rows() != labels.size()) throw InvalidArgument("accuracy: row and label counts differ");
  if (labels.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    if (model.predict(features.row(r)).label == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

ExperimentReport kfold_evaluate(const Dataset& data, const ExperimentConfig& config) {
  const Prepared prep = prepare(data, config);
  ExperimentReport report = start_report("evaluate", data, config, prep);
  std::vector<double> folds;
  for (std::size_t f = 0; f < config.folds; ++f) {
    const FoldModel fm = fit_fold(data, prep, split_fold(prep.fold_of, f), config, report.warnings);
    folds.push_back(accuracy(fm.classifier, fm.test_x, fm.test_y));
  }
  set_baseline(report, std::move(folds));
  return report;
}

ExperimentReport noise_experiment(const Dataset& data, const std::vector<double>& deltas,
                                  const ExperimentConfig& config) {
  require_unit_interval(deltas, "noise", false);
  const Prepared prep = prepare(data, config);
  ExperimentReport report = start_report("perturb", data, config, prep);
  report.knob = "input_noise";
  const SeededStream noise_root = SeededStream(config.encoder.seed).derive("input-noise");

  std::vector<double> baseline;
  std::vector<std::vector<double>> per_value(deltas.size());
  for (std::size_t f = 0; f < config.folds; ++f) {
    const Split split = split_fold(prep.fold_of, f);
    const FoldModel fm = fit_fold(data, prep, split, config, report.warnings);
    baseline.push_back(accuracy(fm.classifier, fm.test_x, fm.test_y));
    const auto& quantizer = fm.classifier.encoder.quantizer();

    // One noise direction per (row, feature), scaled by each delta.
    Matrix unit(fm.test_x.rows(), fm.test_x.cols());
    for (std::size_t r = 0; r < unit.rows(); ++r) {
      SeededStream s = noise_root.derive(std::uint64_t{0}, split.test[r]);
      for (auto& u : unit.row(r)) u = s.uniform(-1.0, 1.0);
    }
    for (std::size_t v = 0; v < deltas.size(); ++v) {
      if (deltas[v] == 0.0) {
        per_value[v].push_back(baseline.back());
        continue;
      }
      Matrix noisy = fm.test_x;
      for (std::size_t r = 0; r < noisy.rows(); ++r) {
        for (std::size_t n = 0; n < noisy.cols(); ++n) noisy(r, n) += deltas[v] * quantizer.range(n) * unit(r, n);
      }
      per_value[v].push_back(accuracy(fm.classifier, noisy, fm.test_y));
    }
  }
  set_baseline(report, std::move(baseline));
  for (std::size_t v = 0; v < deltas.size(); ++v) report.curve.push_back(make_point(deltas[v], per_value[v]));
  return report;
}

ExperimentReport subsample_experiment(const Dataset& data, const std::vector<double>& fractions,
                                      const ExperimentConfig& config) {
  require_unit_interval(fractions, "training fraction", true);
  const Prepared prep = prepare(data, config);
  ExperimentReport report = start_report("perturb", data, config, prep);
  report.knob = "training_fraction";
  const SeededStream root = SeededStream(config.encoder.seed).derive("subsample");

  std::vector<double> baseline;
  std::vector<std::vector<double>> per_value(fractions.size());
  for (std::size_t f = 0; f < config.folds; ++f) {
    const Split split = split_fold(prep.fold_of, f);
    const FoldModel full = fit_fold(data, prep, split, config, report.warnings);
    baseline.push_back(accuracy(full.classifier, full.test_x, full.test_y));

    for (std::size_t v = 0; v < fractions.size(); ++v) {
      if (fractions[v] == 1.0) {
        per_value[v].push_back(baseline.back());
        continue;
      }
      std::vector<std::vector<std::size_t>> by_class(prep.labels.names.size());
      for (auto r : split.train) by_class[prep.labels.index[r]].push_back(r);
      Split sub{{}, split.test};
      for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& rows = by_class[c];
        const auto keep = static_cast<std::size_t>(std::llround(fractions[v] * static_cast<double>(rows.size())));
        if (keep == 0) {
          throw ConfigError("training fraction " + std::to_string(fractions[v]) + " leaves class '" +
                            prep.labels.names[c] + "' without samples in fold " + std::to_string(f));
        }
        SeededStream s = root.derive(f * 1000003ULL + c, v);
        for (std::size_t i = 0; i < keep; ++i) std::swap(rows[i], rows[i + s.below(rows.size() - i)]);
        sub.train.insert(sub.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(keep));
      }
      std::sort(sub.train.begin(), sub.train.end());
      const FoldModel fm = fit_fold(data, prep, sub, config, report.warnings);
      per_value[v].push_back(accuracy(fm.classifier, fm.test_x, fm.test_y));
    }
  }
  set_baseline(report, std::move(baseline));
  for (std::size_t v = 0; v < fractions.size(); ++v) report.curve.push_back(make_point(fractions[v], per_value[v]));
  return report;
}

ExperimentReport bitflip_experiment(const Dataset& data, const std::vector<double>& rates,
                                    const ExperimentConfig& config) {
  for (double p : rates) {
    if (!(p >= 0.0 && p <= 0.5)) throw ConfigError("bit-flip rate " + std::to_string(p) + " is outside [0, 0.5]");
  }
  const Prepared prep = prepare(data, config);
  ExperimentReport report = start_report("perturb", data, config, prep);
  report.knob = "bitflip_rate";
  const SeededStream root = SeededStream(config.encoder.seed).derive("bitflip");

  std::vector<double> baseline;
  std::vector<std::vector<double>> per_value(rates.size());
  for (std::size_t f = 0; f < config.folds; ++f) {
    const FoldModel fm = fit_fold(data, prep, split_fold(prep.fold_of, f), config, report.warnings);
    baseline.push_back(accuracy(fm.classifier, fm.test_x, fm.test_y));
    for (std::size_t v = 0; v < rates.size(); ++v) {
      Classifier faulty = fm.classifier;
      const auto& clusters = fm.classifier.clusters;
      for (std::size_t j = 0; j < clusters.classes(); ++j) {
        for (std::size_t k = 0; k < clusters.clusters(j).size(); ++k) {
          // Same stream for every rate, so larger rates flip a superset of positions.
          SeededStream s = root.derive(f, ClusterModel::tie_context(j, k));
          faulty.clusters.overwrite_prototype(j, k, flip_bits(clusters.cluster(j, k).prototype, rates[v], s));
        }
      }
      per_value[v].push_back(accuracy(faulty, fm.test_x, fm.test_y));
    }
  }
  set_baseline(report, std::move(baseline));
  for (std::size_t v = 0; v < rates.size(); ++v) report.curve.push_back(make_point(rates[v], per_value[v]));
  return report;
}

ExperimentReport hyperparam_sweep(const Dataset& data, SweepAxis axis, const std::vector<std::size_t>& values,
                                  const ExperimentConfig& config) {
  const Prepared prep = prepare(data, config);
  ExperimentReport report = start_report("sweep", data, config, prep);
  report.knob = axis == SweepAxis::Dim ? "dim" : axis == SweepAxis::Clusters ? "clusters" : "retrain";

  std::vector<ExperimentConfig> variants;
  for (auto value : values) {
    ExperimentConfig c = config;
    switch (axis) {
      case SweepAxis::Dim: c.encoder.dim = value; break;
      case SweepAxis::Clusters: c.train.clusters = value; break;
      case SweepAxis::Retrain: c.train.retrain_epochs = value; break;
    }
    validate(c);
    variants.push_back(c);
  }

  std::vector<double> baseline;
  std::vector<std::vector<double>> per_value(values.size());
  for (std::size_t f = 0; f < config.folds; ++f) {
    const Split split = split_fold(prep.fold_of, f);
    const FoldModel base = fit_fold(data, prep, split, config, report.warnings);
    baseline.push_back(accuracy(base.classifier, base.test_x, base.test_y));
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const FoldModel fm = fit_fold(data, prep, split, variants[v], report.warnings);
      per_value[v].push_back(accuracy(fm.classifier, fm.test_x, fm.test_y));
    }
  }
  set_baseline(report, std::move(baseline));
  for (std::size_t v = 0; v < values.size(); ++v) {
    report.curve.push_back(make_point(static_cast<double>(values[v]), per_value[v]));
  }
  return report;
}

Timings timing_report(const Classifier& model, const Matrix& features, std::size_t batch) {
  if (features.rows() == 0) throw InvalidArgument("timing needs at least one row");
  Timings t;
  t.inferences = batch;
  t.prototypes = model.clusters.prototype_count();
  t.features = model.encoder.features();
  t.words_per_vector = Hypervector::words_for(model.encoder.dim());
  OpCounter counter;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < batch; ++i) model.predict(features.row(i % features.rows()), &counter);
  const auto stop = std::chrono::steady_clock::now();
  t.inference_seconds = std::chrono::duration<double>(stop - start).count();
  t.xor_words = counter.xor_words;
  t.popcount_words = counter.popcount_words;
  const std::uint64_t n = batch;
  const std::uint64_t w = t.words_per_vector;
  t.expected_xor_words = n * (t.features + t.prototypes) * w;
  t.expected_popcount_words = n * t.prototypes * w;
  return t;
}

Timings measure_timings(const Dataset& data, const ExperimentConfig& config, std::size_t batch) {
  validate(config);
  require_trainable(data);
  const LabelEncoding labels = encode_labels(data.labels);
  const auto start = std::chrono::steady_clock::now();
  const Classifier model = fit_classifier(data.features, labels.index, labels.names, data.feature_names, config);
  const auto stop = std::chrono::steady_clock::now();
  Timings t = timing_report(model, data.features, batch);
  t.train_seconds = std::chrono::duration<double>(stop - start).count();
  return t;
}

}  // namespace hdcx
