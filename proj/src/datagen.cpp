#include "maghull/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "maghull/error.hpp"

namespace maghull {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kCentersStream = 1;
constexpr std::uint64_t kPointsStream = 2;

[[noreturn]] void invalid(const std::string& msg) { fail(ErrorCode::InvalidSpec, msg); }

std::vector<std::size_t> split_counts(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> counts(parts, total / parts);
  for (std::size_t i = 0; i < total % parts; ++i) ++counts[i];
  return counts;
}

struct Sampler {
  const DatasetSpec& spec;
  std::vector<std::vector<double>> centers;
  std::vector<std::size_t> blob_of;  // per point
  std::size_t moon_outer = 0;

  void draw(Rng& rng, std::size_t i, double* out) const {
    const std::size_t d = spec.dim;
    switch (spec.kind) {
      case DatasetKind::Square:
        for (std::size_t j = 0; j < d; ++j) out[j] = rng.uniform(-0.5 * spec.side, 0.5 * spec.side);
        break;
      case DatasetKind::Annulus: {
        double norm2 = 0.0;
        do {
          norm2 = 0.0;
          for (std::size_t j = 0; j < d; ++j) {
            out[j] = rng.normal();
            norm2 += out[j] * out[j];
          }
        } while (norm2 == 0.0);
        const double dd = static_cast<double>(d);
        const double lo = std::pow(spec.inner_radius, dd), hi = std::pow(spec.outer_radius, dd);
        double r = std::pow(lo + (hi - lo) * rng.uniform(), 1.0 / dd);
        r = std::clamp(r, spec.inner_radius, spec.outer_radius);
        const double s = r / std::sqrt(norm2);
        for (std::size_t j = 0; j < d; ++j) out[j] *= s;
        break;
      }
      case DatasetKind::NoisyMoons: {
        const std::size_t inner = spec.count - moon_outer;
        double x, y;
        if (i < moon_outer) {
          const double a = moon_outer > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(moon_outer - 1) : 0.0;
          x = std::cos(a);
          y = std::sin(a);
        } else {
          const std::size_t k = i - moon_outer;
          const double a = inner > 1 ? std::numbers::pi * static_cast<double>(k) / static_cast<double>(inner - 1) : 0.0;
          x = 1.0 - std::cos(a);
          y = 0.5 - std::sin(a);
        }
        out[0] = x + (spec.noise > 0.0 ? spec.noise * rng.normal() : 0.0);
        out[1] = y + (spec.noise > 0.0 ? spec.noise * rng.normal() : 0.0);
        break;
      }
      case DatasetKind::GaussianBlobs: {
        const auto& c = centers[blob_of[i]];
        for (std::size_t j = 0; j < d; ++j) out[j] = c[j] + spec.blob_sigma * rng.normal();
        break;
      }
    }
  }
};

// Later member of each too-close pair, found by a sweep along coordinate 0.
std::vector<std::size_t> later_duplicates(const std::vector<double>& coords, std::size_t n, std::size_t d) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return coords[a * d] < coords[b * d] || (coords[a * d] == coords[b * d] && a < b);
  });
  std::vector<std::size_t> dups;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t i = order[a], j = order[b];
      if (coords[j * d] - coords[i * d] >= kDuplicateTolerance) break;
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = coords[i * d + k] - coords[j * d + k];
        s += diff * diff;
      }
      if (std::sqrt(s) < kDuplicateTolerance) dups.push_back(std::max(i, j));
    }
  }
  std::sort(dups.begin(), dups.end());
  dups.erase(std::unique(dups.begin(), dups.end()), dups.end());
  return dups;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ull * (stream + 1));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::Annulus: return "annulus";
    case DatasetKind::Square: return "square";
    case DatasetKind::NoisyMoons: return "noisy-moons";
    case DatasetKind::GaussianBlobs: return "gaussian-blobs";
  }
  return "?";
}

DatasetKind parse_dataset_kind(std::string_view text) {
  if (text == "annulus") return DatasetKind::Annulus;
  if (text == "square") return DatasetKind::Square;
  if (text == "noisy-moons" || text == "moons") return DatasetKind::NoisyMoons;
  if (text == "gaussian-blobs" || text == "blobs") return DatasetKind::GaussianBlobs;
  fail(ErrorCode::InvalidSpec, "unknown dataset kind '" + std::string(text) + "'");
}

void DatasetSpec::validate() const {
  if (count < 1) invalid("count must be at least 1");
  if (dim < 1) invalid("dim must be at least 1");
  switch (kind) {
    case DatasetKind::Annulus:
      if (!(inner_radius >= 0.0 && outer_radius > inner_radius && std::isfinite(outer_radius)))
        invalid("annulus needs 0 <= inner radius < outer radius");
      break;
    case DatasetKind::Square:
      if (!(side > 0.0 && std::isfinite(side))) invalid("square side must be positive");
      break;
    case DatasetKind::NoisyMoons:
      if (dim != 2) invalid("noisy-moons is only defined for dim 2");
      if (!(noise >= 0.0 && std::isfinite(noise))) invalid("noise must be nonnegative");
      break;
    case DatasetKind::GaussianBlobs:
      if (!(blob_sigma > 0.0 && std::isfinite(blob_sigma))) invalid("blob sigma must be positive");
      if (centers.empty()) {
        if (blob_count < 1) invalid("blob count must be at least 1");
        if (!(center_box >= 0.0 && std::isfinite(center_box))) invalid("center box must be nonnegative");
      } else {
        for (const auto& c : centers) {
          if (c.size() != dim) invalid("blob center has the wrong dimension");
          for (double x : c)
            if (!std::isfinite(x)) invalid("blob center is not finite");
        }
      }
      break;
  }
}

std::vector<std::vector<double>> blob_centers(const DatasetSpec& spec) {
  if (!spec.centers.empty()) return spec.centers;
  Rng rng(spec.seed, kCentersStream);
  std::vector<std::vector<double>> centers(spec.blob_count, std::vector<double>(spec.dim));
  for (auto& c : centers)
    for (double& x : c) x = rng.uniform(-spec.center_box, spec.center_box);
  return centers;
}

PointCloud generate(const DatasetSpec& spec) {
  spec.validate();
  const std::size_t n = spec.count, d = spec.dim;
  Sampler sampler{spec, {}, {}, 0};
  std::vector<std::string> labels;
  if (spec.kind == DatasetKind::GaussianBlobs) {
    sampler.centers = blob_centers(spec);
    const auto counts = split_counts(n, sampler.centers.size());
    for (std::size_t b = 0; b < counts.size(); ++b) sampler.blob_of.insert(sampler.blob_of.end(), counts[b], b);
    for (std::size_t b : sampler.blob_of) labels.push_back(std::to_string(b));
  } else if (spec.kind == DatasetKind::NoisyMoons) {
    sampler.moon_outer = n / 2;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(i < sampler.moon_outer ? "0" : "1");
  }

  Rng rng(spec.seed, kPointsStream);
  std::vector<double> coords(n * d);
  for (std::size_t i = 0; i < n; ++i) sampler.draw(rng, i, coords.data() + i * d);

  const bool random = !(spec.kind == DatasetKind::NoisyMoons && spec.noise == 0.0);
  for (int round = 0;; ++round) {
    const auto dups = later_duplicates(coords, n, d);
    if (dups.empty()) break;
    if (!random || round >= 100) invalid("dataset spec produces coincident points");
    for (std::size_t i : dups) sampler.draw(rng, i, coords.data() + i * d);
  }
  return PointCloud(d, std::move(coords), std::move(labels));
}

}  // namespace maghull
