#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hdcx/accumulator.hpp"
#include "hdcx/hypervector.hpp"
#include "hdcx/seeded_stream.hpp"

namespace hdcx {

// Which training samples count as errors during retraining.
enum class RetrainMode {
  // Nearest prototype belongs to a different class.
  ClassLevel,
  // Nearest prototype is anything other than the sample's home cluster.
  ClusterLevel,
};

struct TrainConfig {
  std::size_t clusters = 4;        // K, per class
  std::size_t iterations = 10;     // T, clustering rounds
  std::size_t retrain_epochs = 2;  // R
  std::uint64_t seed = 0;
  RetrainMode retrain_mode = RetrainMode::ClassLevel;
};

void validate(const TrainConfig& config);

struct Cluster {
  Accumulator accumulator;
  Hypervector prototype;
  std::size_t members = 0;
};

struct Prediction {
  std::size_t label = 0;    // class index j
  std::size_t cluster = 0;  // cluster index k within the class
  std::size_t distance_bits = 0;
  double distance = 0.0;
};

// Encoded training data. labels[i] indexes label_names.
struct TrainingSet {
  std::vector<Hypervector> samples;
  std::vector<std::size_t> labels;
  std::vector<std::string> label_names;

  std::size_t size() const noexcept { return samples.size(); }
  std::size_t classes() const noexcept { return label_names.size(); }
};

// Home cluster of every training sample, parallel to TrainingSet::samples.
using Assignment = std::vector<std::size_t>;

// Per-class cluster prototypes. Each prototype is the majority of its
// accumulator under the tie stream derived from the model seed, keyed by
// the (class, cluster) pair.
class ClusterModel {
 public:
  ClusterModel(std::size_t dim, std::uint64_t seed, std::vector<std::string> labels);

  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t classes() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t j) const { return labels_.at(j); }

  const std::vector<Cluster>& clusters(std::size_t j) const { return clusters_.at(j); }
  const Cluster& cluster(std::size_t j, std::size_t k) const { return clusters_.at(j).at(k); }
  std::size_t prototype_count() const noexcept;

  // Appends an empty cluster to class j and returns its index.
  std::size_t add_cluster(std::size_t j);
  Accumulator& accumulator(std::size_t j, std::size_t k) { return clusters_.at(j).at(k).accumulator; }
  void set_members(std::size_t j, std::size_t k, std::size_t members) { clusters_.at(j).at(k).members = members; }
  void set_accumulator(std::size_t j, std::size_t k, Accumulator acc);

  // prototype(j, k) = majority(accumulator(j, k)).
  void rebuild_prototype(std::size_t j, std::size_t k);
  void rebuild_prototypes();

  // Replaces a stored prototype without touching its accumulator. Used to
  // inject hardware faults; the next rebuild restores consistency.
  void overwrite_prototype(std::size_t j, std::size_t k, Hypervector prototype);

  // Nearest prototype over all (class, cluster) pairs; ties go to the
  // smallest (class, cluster) in lexicographic order.
  Prediction classify(const Hypervector& sample, OpCounter* counter = nullptr) const;

  // Nearest prototype within class j; ties go to the smallest k.
  Prediction nearest_cluster(const Hypervector& sample, std::size_t j) const;

  static std::uint64_t tie_context(std::size_t j, std::size_t k) noexcept;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  SeededStream ties_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Cluster>> clusters_;
};

// Builds a model from an explicit assignment. Class j gets
// min(clusters_per_class, class size) clusters and every home index must be
// below that count. No empty-cluster repair happens here.
ClusterModel assemble(const TrainingSet& data, const Assignment& home, std::size_t clusters_per_class,
                      std::uint64_t seed);

// Uniform random initial assignment, then empty-cluster repair. A class with
// fewer than K samples gets one cluster per sample.
ClusterModel init_clusters(const TrainingSet& data, const TrainConfig& config, Assignment& home);

// Up to `iterations` rounds of nearest-prototype reassignment and
// re-bundling for class j. Stops early once no assignment changes. Returns
// the number of rounds that changed at least one assignment.
std::size_t cluster_class(ClusterModel& model, const TrainingSet& data, Assignment& home, std::size_t j,
                          std::size_t iterations);

// One batch retraining pass. Errors are found against the model as it was
// at the start of the epoch; each error is subtracted from the winning
// cluster and added to its home cluster, then touched prototypes are
// rebuilt. Returns the number of errors found.
std::size_t retrain_epoch(ClusterModel& model, const TrainingSet& data, const Assignment& home,
                          RetrainMode mode = RetrainMode::ClassLevel);

struct TrainResult {
  ClusterModel model;
  Assignment home;
  std::vector<std::size_t> clustering_rounds;  // per class
  std::vector<std::size_t> retrain_errors;     // per epoch
};

TrainResult train_detailed(const TrainingSet& data, const TrainConfig& config);

inline ClusterModel train(const TrainingSet& data, const TrainConfig& config) {
  return train_detailed(data, config).model;
}

}  // namespace hdcx
