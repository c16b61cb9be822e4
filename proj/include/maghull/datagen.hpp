#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "maghull/geometry.hpp"

namespace maghull {

/// Reproducible generator. The engine is std::mt19937_64, whose output the
/// standard fixes exactly; it is seeded with splitmix64(seed, stream), and
/// uniforms/normals are derived here rather than through the
/// implementation-defined <random> distributions.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  /// [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by Box-Muller (both values of a pair are used).
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer of seed + golden * (stream + 1).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

enum class DatasetKind { Annulus, Square, NoisyMoons, GaussianBlobs };

std::string_view to_string(DatasetKind kind);
/// Accepts the canonical names plus "moons" and "blobs".
DatasetKind parse_dataset_kind(std::string_view text);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::GaussianBlobs;
  std::size_t count = 1000;
  std::size_t dim = 2;
  std::uint64_t seed = 0;

  // annulus: spherical shell of radii [inner, outer], uniform by volume
  double inner_radius = 0.5;
  double outer_radius = 1.0;
  // square: uniform in [-side/2, side/2]^d
  double side = 1.0;
  // noisy moons: gaussian noise on the two arcs
  double noise = 0.1;
  // gaussian blobs: explicit centers, or `blob_count` centers uniform in
  // [-center_box, center_box]^d; counts split evenly, earlier blobs taking
  // the remainder
  std::size_t blob_count = 3;
  double center_box = 5.0;
  double blob_sigma = 1.0;
  std::vector<std::vector<double>> centers;

  void validate() const;
};

/// Deterministic, duplicate-free cloud. Blob points are labelled with their
/// blob number, moons with 0/1.
PointCloud generate(const DatasetSpec& spec);

/// Blob centers used by generate(): spec.centers when given, else drawn.
std::vector<std::vector<double>> blob_centers(const DatasetSpec& spec);

}  // namespace maghull
