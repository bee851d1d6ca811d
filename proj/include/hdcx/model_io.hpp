#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hdcx/encoder.hpp"
#include "hdcx/model.hpp"

namespace hdcx {

inline constexpr char kToolVersion[] = "hdcx 0.1.0";
inline constexpr std::uint32_t kModelFormatVersion = 1;

// Everything needed to classify raw feature vectors.
struct Classifier {
  EncoderModel encoder;
  ClusterModel clusters;
  std::vector<std::string> feature_names;
  std::size_t clusters_per_class = 0;
  std::string tool_version = kToolVersion;

  Prediction predict(std::span<const double> sample, OpCounter* counter = nullptr) const {
    return clusters.classify(encoder.encode(sample, counter), counter);
  }
};

// FNV-1a over the prototype words in (class, cluster) order.
std::uint64_t prototype_checksum(const ClusterModel& model);

// Binary model file, all integers little-endian:
//
//   "HDCX"  u32 format version  u64 total file length
//   str tool version
//   u64 D  u32 M  u32 d  u32 J  u32 K  u64 seed
//   d x str feature name      J x str label
//   d x (f64 lower, f64 upper)
//   J x { u32 clusters, clusters x { u64 members, i64 contributions, D x i32 } }
//   u64 prototype checksum    u64 FNV-1a of every preceding byte
//
// str is a u32 byte length followed by UTF-8 bytes. Dictionaries and
// prototypes are not stored; they are regenerated from the seed and the
// accumulators, and the prototype checksum is verified against the result.
std::vector<unsigned char> serialize(const Classifier& model);
Classifier deserialize(const std::vector<unsigned char>& bytes);

// Throws ModelFileError with a distinct kind for I/O failure, bad magic,
// version mismatch, truncation and checksum failure.
void save_model(const Classifier& model, const std::filesystem::path& path);
Classifier load_model(const std::filesystem::path& path);

}  // namespace hdcx
