// Command-line front end: train, predict, evaluate, perturb, sweep and
// check-theory.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdcx/dataset.hpp"
#include "hdcx/errors.hpp"
#include "hdcx/evaluation.hpp"
#include "hdcx/model_io.hpp"
#include "hdcx/report.hpp"
#include "hdcx/theory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitModel = 4;

struct Options {
  std::string data;
  std::string label_col = "label";
  std::vector<std::string> features;
  char delimiter = ',';
  std::size_t dim = 10000;
  std::size_t levels = 101;
  std::size_t clusters = 4;
  std::size_t iters = 10;
  std::size_t retrain = 2;
  std::string retrain_mode = "class";
  std::uint64_t seed = 0;
  std::size_t folds = 10;
  std::string out;
  std::string model;
  bool timings = false;
  std::string mode;
  std::string axis;
  std::vector<double> values;
  std::size_t trials = 200;
};

void add_data_flags(CLI::App* cmd, Options& o, bool label_required) {
  cmd->add_option("--data", o.data, "Delimited text file with a header row")->required()->check(CLI::ExistingFile);
  auto* label = cmd->add_option("--label-col", o.label_col, "Name of the label column");
  if (label_required) label->capture_default_str();
  cmd->add_option("--features", o.features, "Feature column allowlist (comma separated)")->delimiter(',');
  cmd->add_option("--delimiter", o.delimiter, "Field delimiter")->capture_default_str();
}

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--dim", o.dim, "Hypervector dimension D")->capture_default_str();
  cmd->add_option("--levels", o.levels, "Level count M; M - 1 must divide D")->capture_default_str();
  cmd->add_option("--clusters", o.clusters, "Clusters per class K")->capture_default_str();
  cmd->add_option("--iters", o.iters, "Clustering iterations T")->capture_default_str();
  cmd->add_option("--retrain", o.retrain, "Retraining epochs R")->capture_default_str();
  cmd->add_option("--retrain-mode", o.retrain_mode, "Retraining error criterion")
      ->check(CLI::IsMember({"class", "cluster"}))
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
}

void add_eval_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--folds", o.folds, "Stratified folds")->capture_default_str();
  cmd->add_option("--out", o.out, "Write the report here instead of stdout");
  cmd->add_flag("--timings", o.timings, "Append wall-clock timings and operation counts (not reproducible)");
}

hdcx::ExperimentConfig experiment_config(const Options& o) {
  hdcx::ExperimentConfig c;
  c.encoder.dim = o.dim;
  c.encoder.levels = o.levels;
  c.encoder.seed = o.seed;
  c.train.clusters = o.clusters;
  c.train.iterations = o.iters;
  c.train.retrain_epochs = o.retrain;
  c.train.seed = o.seed;
  c.train.retrain_mode = o.retrain_mode == "cluster" ? hdcx::RetrainMode::ClusterLevel : hdcx::RetrainMode::ClassLevel;
  c.folds = o.folds;
  return c;
}

hdcx::Dataset load(const Options& o, bool with_labels) {
  hdcx::DatasetSpec spec;
  spec.path = o.data;
  spec.label_column = with_labels ? o.label_col : std::string();
  spec.feature_columns = o.features;
  spec.delimiter = o.delimiter;
  return hdcx::load_csv(spec);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw hdcx::ConfigError("cannot write output file '" + path + "'");
  out << text;
}

void emit_report(hdcx::ExperimentReport report, const Options& o, const hdcx::Dataset& data) {
  if (o.timings) report.timings = hdcx::measure_timings(data, experiment_config(o));
  hdcx::Json j = hdcx::to_json(report);
  j["config"]["data"] = o.data;
  j["config"]["label_col"] = o.label_col;
  emit(hdcx::render(j), o.out);
}

int run_train(const Options& o) {
  const auto data = load(o, true);
  hdcx::require_trainable(data);
  const auto config = experiment_config(o);
  const auto labels = hdcx::encode_labels(data.labels);
  std::vector<std::string> warnings;
  const auto model =
      hdcx::fit_classifier(data.features, labels.index, labels.names, data.feature_names, config, &warnings);
  if (o.out.empty()) throw hdcx::ConfigError("train needs --out for the model file");
  hdcx::save_model(model, o.out);
  hdcx::Json j;
  j["model"] = o.out;
  j["config"] = hdcx::to_json(config);
  j["training_accuracy"] = hdcx::accuracy(model, data.features, labels.index);
  j["prototypes"] = model.clusters.prototype_count();
  j["warnings"] = warnings;
  std::cout << hdcx::render(j);
  return kExitOk;
}

int run_predict(const Options& o) {
  const auto model = hdcx::load_model(o.model);
  Options opts = o;
  bool labeled = !o.label_col.empty();
  if (opts.features.empty()) opts.features = model.feature_names;
  hdcx::Dataset data;
  try {
    data = load(opts, labeled);
  } catch (const hdcx::DataError&) {
    // The label column is optional for prediction.
    labeled = false;
    data = load(opts, false);
  }
  if (data.features.cols() != model.encoder.features()) {
    throw hdcx::DataError("data has " + std::to_string(data.features.cols()) + " feature columns, model expects " +
                          std::to_string(model.encoder.features()));
  }
  std::string csv = "row,prediction,cluster,distance\n";
  std::size_t correct = 0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto p = model.predict(data.features.row(r));
    const auto& label = model.clusters.label(p.label);
    if (labeled && label == data.labels[r]) ++correct;
    csv += std::to_string(r) + "," + label + "," + std::to_string(p.cluster) + "," + std::to_string(p.distance) + "\n";
  }
  emit(csv, o.out);
  if (labeled && data.rows() > 0) {
    std::cerr << "accuracy " << static_cast<double>(correct) / static_cast<double>(data.rows()) << "\n";
  }
  return kExitOk;
}

int run_evaluate(const Options& o) {
  const auto data = load(o, true);
  emit_report(hdcx::kfold_evaluate(data, experiment_config(o)), o, data);
  return kExitOk;
}

int run_perturb(const Options& o) {
  const auto data = load(o, true);
  const auto config = experiment_config(o);
  hdcx::ExperimentReport report;
  if (o.mode == "noise") {
    report = hdcx::noise_experiment(data, o.values, config);
  } else if (o.mode == "subsample") {
    report = hdcx::subsample_experiment(data, o.values, config);
  } else {
    report = hdcx::bitflip_experiment(data, o.values, config);
  }
  emit_report(std::move(report), o, data);
  return kExitOk;
}

int run_sweep(const Options& o) {
  const auto data = load(o, true);
  std::vector<std::size_t> values;
  for (double v : o.values) {
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw hdcx::ConfigError("sweep values must be non-negative integers");
    }
    values.push_back(static_cast<std::size_t>(v));
  }
  const auto axis = o.axis == "dim" ? hdcx::SweepAxis::Dim
                    : o.axis == "clusters" ? hdcx::SweepAxis::Clusters
                                           : hdcx::SweepAxis::Retrain;
  emit_report(hdcx::hyperparam_sweep(data, axis, values, experiment_config(o)), o, data);
  return kExitOk;
}

int run_check_theory(const Options& o) {
  namespace th = hdcx::theory;
  const hdcx::SeededStream root(o.seed);
  const std::size_t big = 10000;
  std::vector<th::TrialReport> reports;
  reports.push_back(th::estimate_random_pair_distance(big, o.trials, root.derive("random-pairs")));
  reports.push_back(th::estimate_bound_distance(big, o.trials, root.derive("bound-pairs")));
  for (std::size_t n : {3, 5, 9}) {
    reports.push_back(th::estimate_bundle_distance(n, big, o.trials, root.derive("bundle-distance", n)));
    reports.push_back(th::estimate_bundle_separation(n, big, o.trials, root.derive("bundle-separation", n)));
  }
  for (auto [d, p] : {std::pair{0.2, 0.1}, std::pair{0.2, 0.2}, std::pair{0.4, 0.1}}) {
    reports.push_back(th::estimate_flip_law(d, p, big, o.trials, root.derive("flip-law")));
  }
  reports.push_back(th::estimate_ordering_preservation(0.2, 0.3, 0.2, big, o.trials, root.derive("ordering")));
  th::NoiseCurveConfig noise;
  noise.encoder.seed = o.seed;
  for (auto& r : th::estimate_noise_curve(noise, {0.0, 0.05, 0.1, 0.2, 0.4}, o.trials, root.derive("encode-noise"))) {
    reports.push_back(std::move(r));
  }

  hdcx::Json j;
  j["seed"] = o.seed;
  j["trials"] = o.trials;
  hdcx::Json list = hdcx::Json::array();
  bool all = true;
  for (const auto& r : reports) {
    list.push_back(hdcx::to_json(r));
    all = all && r.passed;
  }
  j["reports"] = list;
  const auto uniformity = th::check_position_uniformity(0.2, 1000, 2000, 20, root.derive("position-uniformity"));
  j["position_uniformity"] = {{"statistic", uniformity.statistic},
                              {"degrees_of_freedom", uniformity.degrees_of_freedom},
                              {"critical_value", uniformity.critical_value},
                              {"consistent", uniformity.consistent},
                              {"gating", false}};
  j["all_passed"] = all;
  emit(hdcx::render(j), o.out);
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperdimensional clustering classifier"};
  app.require_subcommand(1);
  Options o;

  auto* train = app.add_subcommand("train", "Fit on every row and save a model file");
  add_data_flags(train, o, true);
  add_model_flags(train, o);
  train->add_option("--out", o.out, "Model file to write")->required();

  auto* predict = app.add_subcommand("predict", "Classify rows with a saved model");
  predict->add_option("--model", o.model, "Model file")->required();
  add_data_flags(predict, o, false);
  predict->add_option("--out", o.out, "Write predictions CSV here instead of stdout");

  auto* evaluate = app.add_subcommand("evaluate", "Stratified k-fold accuracy");
  add_data_flags(evaluate, o, true);
  add_model_flags(evaluate, o);
  add_eval_flags(evaluate, o);

  auto* perturb = app.add_subcommand("perturb", "Robustness curves");
  add_data_flags(perturb, o, true);
  add_model_flags(perturb, o);
  add_eval_flags(perturb, o);
  perturb->add_option("--mode", o.mode, "noise | subsample | bitflip")
      ->required()
      ->check(CLI::IsMember({"noise", "subsample", "bitflip"}));
  perturb->add_option("--values", o.values, "Knob values (comma separated)")->required()->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "Hyperparameter sensitivity");
  add_data_flags(sweep, o, true);
  add_model_flags(sweep, o);
  add_eval_flags(sweep, o);
  sweep->add_option("--axis", o.axis, "dim | clusters | retrain")
      ->required()
      ->check(CLI::IsMember({"dim", "clusters", "retrain"}));
  sweep->add_option("--values", o.values, "Axis values (comma separated)")->required()->delimiter(',');

  auto* theory = app.add_subcommand("check-theory", "Monte Carlo checks of the HDC distance laws");
  theory->add_option("--trials", o.trials, "Trials per estimator")->capture_default_str();
  theory->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  theory->add_option("--out", o.out, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train) return run_train(o);
    if (*predict) return run_predict(o);
    if (*evaluate) return run_evaluate(o);
    if (*perturb) return run_perturb(o);
    if (*sweep) return run_sweep(o);
    if (*theory) return run_check_theory(o);
  } catch (const hdcx::ModelFileError& e) {
    std::cerr << "model file error: " << e.what() << "\n";
    return kExitModel;
  } catch (const hdcx::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const hdcx::Error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
