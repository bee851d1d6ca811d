#include "hdcx/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hdcx/errors.hpp"
#include "hdcx/seeded_stream.hpp"

namespace hdcx {

namespace {

using Kind = ModelFileError::Kind;

constexpr char kMagic[4] = {'H', 'D', 'C', 'X'};
constexpr std::size_t kLengthOffset = 8;
constexpr std::size_t kHeaderSize = 16;

class Writer {
 public:
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  void patch_u64(std::size_t offset, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_[offset + i] = static_cast<unsigned char>(v >> (8 * i));
  }
  std::vector<unsigned char>& bytes() { return bytes_; }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  std::vector<unsigned char> bytes_;
};

class Reader {
 public:
  Reader(const std::vector<unsigned char>& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (n > end_ - pos_) throw ModelFileError(Kind::Malformed, "model file: field runs past the payload");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  const std::vector<unsigned char>& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::uint64_t read_u64_at(const std::vector<unsigned char>& bytes, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[offset + i]) << (8 * i);
  return v;
}

}  // namespace

std::uint64_t prototype_checksum(const ClusterModel& model) {
  // FNV-1a over the little-endian bytes of every prototype word.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t j = 0; j < model.classes(); ++j) {
    for (const auto& c : model.clusters(j)) {
      for (auto w : c.prototype.words()) {
        for (int i = 0; i < 8; ++i) {
          h ^= (w >> (8 * i)) & 0xFFU;
          h *= 0x100000001B3ULL;
        }
      }
    }
  }
  return h;
}

std::vector<unsigned char> serialize(const Classifier& model) {
  const auto& enc = model.encoder;
  const auto& clusters = model.clusters;
  Writer w;
  w.raw(kMagic, 4);
  w.u32(kModelFormatVersion);
  w.u64(0);  // total length, patched below
  w.str(model.tool_version);
  w.u64(enc.dim());
  w.u32(static_cast<std::uint32_t>(enc.config().levels));
  w.u32(static_cast<std::uint32_t>(enc.features()));
  w.u32(static_cast<std::uint32_t>(clusters.classes()));
  w.u32(static_cast<std::uint32_t>(model.clusters_per_class));
  w.u64(enc.config().seed);
  for (std::size_t n = 0; n < enc.features(); ++n) {
    w.str(n < model.feature_names.size() ? model.feature_names[n] : "feature_" + std::to_string(n));
  }
  for (const auto& l : clusters.labels()) w.str(l);
  for (std::size_t n = 0; n < enc.features(); ++n) {
    w.f64(enc.quantizer().bounds(n).lower);
    w.f64(enc.quantizer().bounds(n).upper);
  }
  for (std::size_t j = 0; j < clusters.classes(); ++j) {
    w.u32(static_cast<std::uint32_t>(clusters.clusters(j).size()));
    for (const auto& c : clusters.clusters(j)) {
      w.u64(c.members);
      w.i64(c.accumulator.contributions());
      for (auto count : c.accumulator.counts()) w.i32(count);
    }
  }
  w.u64(prototype_checksum(clusters));
  auto& bytes = w.bytes();
  w.patch_u64(kLengthOffset, bytes.size() + 8);
  w.u64(bytes_hash(bytes.data(), bytes.size()));
  return std::move(w.bytes());
}

Classifier deserialize(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ModelFileError(bytes.size() < 4 ? Kind::Truncated : Kind::BadMagic, "model file: missing HDCX tag");
  }
  if (bytes.size() < kHeaderSize + 16) throw ModelFileError(Kind::Truncated, "model file: truncated header");
  Reader header(bytes, kHeaderSize);
  header.skip(4);
  const std::uint32_t version = header.u32();
  if (version != kModelFormatVersion) {
    throw ModelFileError(Kind::VersionMismatch, "model file: format version " + std::to_string(version) +
                                                    ", this build reads version " +
                                                    std::to_string(kModelFormatVersion));
  }
  const std::uint64_t declared = header.u64();
  const std::size_t body_end = bytes.size() - 8;
  if (bytes_hash(bytes.data(), body_end) != read_u64_at(bytes, body_end)) {
    if (declared > bytes.size()) {
      throw ModelFileError(Kind::Truncated, "model file: expected " + std::to_string(declared) + " bytes, found " +
                                                std::to_string(bytes.size()));
    }
    throw ModelFileError(Kind::Checksum, "model file: checksum mismatch");
  }
  if (declared != bytes.size()) throw ModelFileError(Kind::Malformed, "model file: length field disagrees");

  Reader r(bytes, body_end);
  r.skip(kHeaderSize);
  const std::string tool = r.str();
  EncoderConfig cfg;
  cfg.dim = r.u64();
  cfg.levels = r.u32();
  const std::uint32_t features = r.u32();
  const std::uint32_t classes = r.u32();
  const std::uint32_t per_class = r.u32();
  cfg.seed = r.u64();
  if (cfg.dim == 0 || cfg.dim > (std::size_t{1} << 32)) throw ModelFileError(Kind::Malformed, "model file: bad D");

  std::vector<std::string> names(features);
  for (auto& n : names) n = r.str();
  std::vector<std::string> labels(classes);
  for (auto& l : labels) l = r.str();
  std::vector<FeatureBounds> bounds(features);
  for (auto& b : bounds) {
    b.lower = r.f64();
    b.upper = r.f64();
  }

  try {
    EncoderModel encoder(cfg, FeatureQuantizer(std::move(bounds), cfg.levels));
    ClusterModel clusters(cfg.dim, cfg.seed, std::move(labels));
    for (std::uint32_t j = 0; j < classes; ++j) {
      const std::uint32_t count = r.u32();
      for (std::uint32_t k = 0; k < count; ++k) {
        clusters.add_cluster(j);
        const std::uint64_t members = r.u64();
        const std::int64_t contributions = r.i64();
        std::vector<std::int32_t> counts(cfg.dim);
        for (auto& c : counts) c = r.i32();
        clusters.set_accumulator(j, k, Accumulator::from_counts(std::move(counts), contributions));
        clusters.set_members(j, k, members);
        clusters.rebuild_prototype(j, k);
      }
    }
    const std::uint64_t stored = r.u64();
    if (r.position() != body_end) throw ModelFileError(Kind::Malformed, "model file: trailing bytes");
    if (stored != prototype_checksum(clusters)) {
      throw ModelFileError(Kind::Checksum, "model file: regenerated prototypes do not match the stored checksum");
    }
    return Classifier{std::move(encoder), std::move(clusters), std::move(names), per_class, tool};
  } catch (const ModelFileError&) {
    throw;
  } catch (const Error& e) {
    throw ModelFileError(Kind::Malformed, std::string("model file: ") + e.what());
  }
}

void save_model(const Classifier& model, const std::filesystem::path& path) {
  const auto bytes = serialize(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelFileError(Kind::Io, "cannot write model file '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ModelFileError(Kind::Io, "failed writing model file '" + path.string() + "'");
}

Classifier load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFileError(Kind::Io, "cannot open model file '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace hdcx
