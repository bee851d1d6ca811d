#include "hdcx/report.hpp"

namespace hdcx {

const char* to_string(RetrainMode mode) noexcept {
  return mode == RetrainMode::ClassLevel ? "class" : "cluster";
}

Json to_json(const ExperimentConfig& config) {
  Json j;
  j["dim"] = config.encoder.dim;
  j["levels"] = config.encoder.levels;
  j["clusters"] = config.train.clusters;
  j["iters"] = config.train.iterations;
  j["retrain"] = config.train.retrain_epochs;
  j["retrain_mode"] = to_string(config.train.retrain_mode);
  j["seed"] = config.encoder.seed;
  j["train_seed"] = config.train.seed;
  j["folds"] = config.folds;
  return j;
}

Json to_json(const Timings& t) {
  Json j;
  j["train_seconds"] = t.train_seconds;
  j["inferences"] = t.inferences;
  j["inference_seconds"] = t.inference_seconds;
  j["prototypes"] = t.prototypes;
  j["features"] = t.features;
  j["words_per_vector"] = t.words_per_vector;
  j["xor_words"] = t.xor_words;
  j["popcount_words"] = t.popcount_words;
  j["expected_xor_words"] = t.expected_xor_words;
  j["expected_popcount_words"] = t.expected_popcount_words;
  return j;
}

Json to_json(const ExperimentReport& r) {
  Json j;
  j["experiment"] = r.experiment;
  j["config"] = to_json(r.config);
  Json data;
  data["rows"] = r.rows;
  data["features"] = r.features;
  Json classes = Json::array();
  for (std::size_t c = 0; c < r.class_names.size(); ++c) {
    classes.push_back(Json{{"label", r.class_names[c]}, {"count", r.class_counts[c]}});
  }
  data["classes"] = classes;
  j["dataset"] = data;
  j["fold_accuracies"] = r.fold_accuracies;
  j["mean_accuracy"] = r.mean_accuracy;
  j["std_accuracy"] = r.std_accuracy;
  if (!r.knob.empty()) {
    Json curve = Json::array();
    for (const auto& p : r.curve) {
      curve.push_back(Json{{"value", p.value},
                           {"mean_accuracy", p.mean_accuracy},
                           {"std_accuracy", p.std_accuracy},
                           {"fold_accuracies", p.fold_accuracies}});
    }
    j["knob"] = r.knob;
    j["curve"] = curve;
  }
  if (r.timings) j["timings"] = to_json(*r.timings);
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const theory::TrialReport& r) {
  Json j;
  j["name"] = r.name;
  j["trials"] = r.trials;
  j["dim"] = r.dim;
  j["mean"] = r.mean;
  j["stddev"] = r.stddev;
  j["min"] = r.min;
  j["max"] = r.max;
  j["reference"] = r.reference;
  j["tolerance"] = r.tolerance;
  j["one_sided"] = r.one_sided;
  j["passed"] = r.passed;
  return j;
}

std::string render(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace hdcx
