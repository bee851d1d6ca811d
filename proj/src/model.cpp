#include "hdcx/model.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "hdcx/errors.hpp"

namespace hdcx {

void validate(const TrainConfig& config) {
  if (config.clusters == 0) throw ConfigError("cluster count K must be at least 1");
}

ClusterModel::ClusterModel(std::size_t dim, std::uint64_t seed, std::vector<std::string> labels)
    : dim_(dim),
      seed_(seed),
      ties_(SeededStream(seed).derive("cluster-ties")),
      labels_(std::move(labels)),
      clusters_(labels_.size()) {
  if (dim_ == 0) throw InvalidArgument("model dimension must be positive");
}

std::size_t ClusterModel::prototype_count() const noexcept {
  std::size_t total = 0;
  for (const auto& c : clusters_) total += c.size();
  return total;
}

std::size_t ClusterModel::add_cluster(std::size_t j) {
  auto& list = clusters_.at(j);
  Cluster c;
  c.accumulator = Accumulator(dim_);
  list.push_back(std::move(c));
  rebuild_prototype(j, list.size() - 1);
  return list.size() - 1;
}

void ClusterModel::set_accumulator(std::size_t j, std::size_t k, Accumulator acc) {
  if (acc.dim() != dim_) throw InvalidArgument("accumulator dimension does not match the model");
  clusters_.at(j).at(k).accumulator = std::move(acc);
}

std::uint64_t ClusterModel::tie_context(std::size_t j, std::size_t k) noexcept {
  return (static_cast<std::uint64_t>(j) << 32) | static_cast<std::uint64_t>(k);
}

void ClusterModel::rebuild_prototype(std::size_t j, std::size_t k) {
  auto& c = clusters_.at(j).at(k);
  c.prototype = majority(c.accumulator, ties_, tie_context(j, k));
}

void ClusterModel::rebuild_prototypes() {
  for (std::size_t j = 0; j < clusters_.size(); ++j) {
    for (std::size_t k = 0; k < clusters_[j].size(); ++k) rebuild_prototype(j, k);
  }
}

void ClusterModel::overwrite_prototype(std::size_t j, std::size_t k, Hypervector prototype) {
  if (prototype.dim() != dim_) throw InvalidArgument("prototype dimension does not match the model");
  clusters_.at(j).at(k).prototype = std::move(prototype);
}

Prediction ClusterModel::classify(const Hypervector& sample, OpCounter* counter) const {
  if (sample.dim() != dim_) {
    throw InvalidArgument("classify: dimension mismatch (" + std::to_string(sample.dim()) + " vs " +
                          std::to_string(dim_) + ")");
  }
  Prediction best;
  bool found = false;
  for (std::size_t j = 0; j < clusters_.size(); ++j) {
    for (std::size_t k = 0; k < clusters_[j].size(); ++k) {
      const std::size_t d = hamming_count(sample, clusters_[j][k].prototype, counter);
      if (!found || d < best.distance_bits) {
        best = {j, k, d, 0.0};
        found = true;
      }
    }
  }
  if (!found) throw InvalidArgument("classify: model has no clusters");
  best.distance = static_cast<double>(best.distance_bits) / static_cast<double>(dim_);
  return best;
}

Prediction ClusterModel::nearest_cluster(const Hypervector& sample, std::size_t j) const {
  if (sample.dim() != dim_) throw InvalidArgument("nearest_cluster: dimension mismatch");
  const auto& list = clusters_.at(j);
  if (list.empty()) throw InvalidArgument("nearest_cluster: class has no clusters");
  Prediction best{j, 0, hamming_count(sample, list[0].prototype), 0.0};
  for (std::size_t k = 1; k < list.size(); ++k) {
    const std::size_t d = hamming_count(sample, list[k].prototype);
    if (d < best.distance_bits) best = {j, k, d, 0.0};
  }
  best.distance = static_cast<double>(best.distance_bits) / static_cast<double>(dim_);
  return best;
}

namespace {

void check_training_set(const TrainingSet& data) {
  if (data.samples.size() != data.labels.size()) {
    throw InvalidArgument("training set has " + std::to_string(data.samples.size()) + " samples but " +
                          std::to_string(data.labels.size()) + " labels");
  }
  if (data.samples.empty()) throw DataError("training set is empty");
  std::vector<std::size_t> per_class(data.classes(), 0);
  const std::size_t dim = data.samples.front().dim();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.samples[i].dim() != dim) throw InvalidArgument("training samples have inconsistent dimensions");
    if (data.labels[i] >= data.classes()) {
      throw InvalidArgument("label index " + std::to_string(data.labels[i]) + " out of range");
    }
    ++per_class[data.labels[i]];
  }
  for (std::size_t j = 0; j < per_class.size(); ++j) {
    if (per_class[j] == 0) throw DataError("class '" + data.label_names[j] + "' has no training samples");
  }
}

std::vector<std::vector<std::size_t>> members_by_class(const TrainingSet& data) {
  std::vector<std::vector<std::size_t>> out(data.classes());
  for (std::size_t i = 0; i < data.size(); ++i) out[data.labels[i]].push_back(i);
  return out;
}

// Re-bundles every cluster of class j from the current assignment.
void rebundle_class(ClusterModel& model, const TrainingSet& data, const Assignment& home,
                    const std::vector<std::size_t>& members, std::size_t j) {
  const std::size_t count = model.clusters(j).size();
  std::vector<Accumulator> accs(count, Accumulator(model.dim()));
  std::vector<std::size_t> sizes(count, 0);
  for (auto i : members) {
    accs[home[i]].add(data.samples[i]);
    ++sizes[home[i]];
  }
  for (std::size_t k = 0; k < count; ++k) {
    model.set_accumulator(j, k, std::move(accs[k]));
    model.set_members(j, k, sizes[k]);
    model.rebuild_prototype(j, k);
  }
}

// Refills empty clusters of class j with the member farthest from its own
// prototype, taken from a cluster that can spare one.
void repair_empty(ClusterModel& model, const TrainingSet& data, Assignment& home,
                  const std::vector<std::size_t>& members, std::size_t j) {
  for (std::size_t k = 0; k < model.clusters(j).size(); ++k) {
    if (model.cluster(j, k).members > 0) continue;
    std::size_t donor = members.size();
    std::size_t worst = 0;
    for (std::size_t idx = 0; idx < members.size(); ++idx) {
      const std::size_t i = members[idx];
      const auto& from = model.cluster(j, home[i]);
      if (from.members < 2) continue;
      const std::size_t d = hamming_count(data.samples[i], from.prototype);
      if (donor == members.size() || d > worst) {
        donor = idx;
        worst = d;
      }
    }
    if (donor == members.size()) continue;  // class smaller than its cluster count
    const std::size_t i = members[donor];
    const std::size_t old = home[i];
    home[i] = k;
    model.accumulator(j, old).subtract(data.samples[i]);
    model.accumulator(j, k).add(data.samples[i]);
    model.set_members(j, old, model.cluster(j, old).members - 1);
    model.set_members(j, k, 1);
    model.rebuild_prototype(j, old);
    model.rebuild_prototype(j, k);
  }
}

}  // namespace

ClusterModel assemble(const TrainingSet& data, const Assignment& home, std::size_t clusters_per_class,
                      std::uint64_t seed) {
  check_training_set(data);
  if (home.size() != data.size()) throw InvalidArgument("assignment size does not match the training set");
  if (clusters_per_class == 0) throw ConfigError("cluster count K must be at least 1");
  ClusterModel model(data.samples.front().dim(), seed, data.label_names);
  const auto members = members_by_class(data);
  for (std::size_t j = 0; j < data.classes(); ++j) {
    const std::size_t count = std::min(clusters_per_class, members[j].size());
    for (std::size_t k = 0; k < count; ++k) model.add_cluster(j);
    for (auto i : members[j]) {
      if (home[i] >= count) {
        throw InvalidArgument("sample " + std::to_string(i) + " assigned to cluster " + std::to_string(home[i]) +
                              " but class has " + std::to_string(count));
      }
    }
    rebundle_class(model, data, home, members[j], j);
  }
  return model;
}

ClusterModel init_clusters(const TrainingSet& data, const TrainConfig& config, Assignment& home) {
  validate(config);
  check_training_set(data);
  const auto members = members_by_class(data);
  home.assign(data.size(), 0);
  const SeededStream root = SeededStream(config.seed).derive("init-clusters");
  for (std::size_t j = 0; j < data.classes(); ++j) {
    SeededStream stream = root.derive(std::uint64_t{0}, j);
    const std::size_t count = std::min(config.clusters, members[j].size());
    for (auto i : members[j]) home[i] = static_cast<std::size_t>(stream.below(count));
  }
  ClusterModel model = assemble(data, home, config.clusters, config.seed);
  for (std::size_t j = 0; j < data.classes(); ++j) repair_empty(model, data, home, members[j], j);
  return model;
}

std::size_t cluster_class(ClusterModel& model, const TrainingSet& data, Assignment& home, std::size_t j,
                          std::size_t iterations) {
  if (home.size() != data.size()) throw InvalidArgument("assignment size does not match the training set");
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] == j) members.push_back(i);
  }
  std::size_t rounds = 0;
  for (std::size_t t = 0; t < iterations; ++t) {
    std::size_t changed = 0;
    Assignment next = home;
    for (auto i : members) {
      next[i] = model.nearest_cluster(data.samples[i], j).cluster;
      if (next[i] != home[i]) ++changed;
    }
    if (changed == 0) break;
    home = std::move(next);
    ++rounds;
    rebundle_class(model, data, home, members, j);
    repair_empty(model, data, home, members, j);
  }
  return rounds;
}

std::size_t retrain_epoch(ClusterModel& model, const TrainingSet& data, const Assignment& home,
                          RetrainMode mode) {
  if (home.size() != data.size()) throw InvalidArgument("assignment size does not match the training set");
  struct Move {
    std::size_t sample;
    std::size_t from_j, from_k;
  };
  std::vector<Move> moves;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Prediction p = model.classify(data.samples[i]);
    const bool wrong = mode == RetrainMode::ClassLevel
                           ? p.label != data.labels[i]
                           : (p.label != data.labels[i] || p.cluster != home[i]);
    if (wrong) moves.push_back({i, p.label, p.cluster});
  }

  std::vector<std::vector<bool>> touched(model.classes());
  for (std::size_t j = 0; j < model.classes(); ++j) touched[j].assign(model.clusters(j).size(), false);
  for (const auto& m : moves) {
    const std::size_t j = data.labels[m.sample];
    const std::size_t k = home[m.sample];
    model.accumulator(m.from_j, m.from_k).subtract(data.samples[m.sample]);
    model.accumulator(j, k).add(data.samples[m.sample]);
    touched[m.from_j][m.from_k] = true;
    touched[j][k] = true;
  }
  for (std::size_t j = 0; j < touched.size(); ++j) {
    for (std::size_t k = 0; k < touched[j].size(); ++k) {
      if (touched[j][k]) model.rebuild_prototype(j, k);
    }
  }
  return moves.size();
}

TrainResult train_detailed(const TrainingSet& data, const TrainConfig& config) {
  Assignment home;
  ClusterModel model = init_clusters(data, config, home);
  TrainResult result{std::move(model), std::move(home), {}, {}};
  for (std::size_t j = 0; j < data.classes(); ++j) {
    result.clustering_rounds.push_back(cluster_class(result.model, data, result.home, j, config.iterations));
  }
  for (std::size_t r = 0; r < config.retrain_epochs; ++r) {
    result.retrain_errors.push_back(retrain_epoch(result.model, data, result.home, config.retrain_mode));
  }
  return result;
}

}  // namespace hdcx
