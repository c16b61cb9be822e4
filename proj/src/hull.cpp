#include "maghull/hull.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "maghull/error.hpp"
#include "maghull/textio.hpp"

namespace maghull {
namespace {

using VertexTuple = std::array<std::uint32_t, kMaxHullDim>;

struct RidgeHash {
  std::size_t operator()(const VertexTuple& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::uint32_t v : k) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

double factorial(std::size_t d) { return std::tgamma(static_cast<double>(d) + 1.0); }

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

IncrementalHull::IncrementalHull(const PointCloud& cloud) : cloud_(&cloud), d_(cloud.dim()) {
  require(d_ >= 1 && d_ <= kMaxHullDim, "convex hull supports dimensions 1 to 8");
  inv_factorial_ = 1.0 / factorial(d_);
}

void IncrementalHull::insert(std::size_t index) {
  require(index < cloud_->size(), "IncrementalHull::insert: index out of range");
  if (full_) {
    insert_full(index);
    return;
  }
  std::vector<const double*> pts;
  for (std::size_t b : basis_) pts.push_back(coords(b));
  pts.push_back(coords(index));
  if (geom::exact_affine_rank(pts, d_) == basis_.size() + 1)
    basis_.push_back(index);
  else
    pending_.push_back(index);
  if (basis_.size() == d_ + 1) {
    build_simplex();
    full_ = true;
    std::vector<std::size_t> rest;
    rest.swap(pending_);
    for (std::size_t i : rest) insert_full(i);
  }
}

void IncrementalHull::build_simplex() {
  interior_.fill(0.0);
  for (std::size_t b : basis_)
    for (std::size_t j = 0; j < d_; ++j) interior_[j] += coords(b)[j];
  for (std::size_t j = 0; j < d_; ++j) interior_[j] /= static_cast<double>(d_ + 1);

  std::array<double, kMaxHullDim * kMaxHullDim> m{};
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j) m[i * d_ + j] = coords(basis_[i + 1])[j] - coords(basis_[0])[j];
  volume_ = std::abs(geom::filtered_determinant(std::span<const double>(m.data(), d_ * d_), d_).value) *
            inv_factorial_;

  for (std::size_t omit = 0; omit <= d_; ++omit) {
    VertexTuple v{};
    std::size_t k = 0;
    for (std::size_t i = 0; i <= d_; ++i)
      if (i != omit) v[k++] = static_cast<std::uint32_t>(basis_[i]);
    add_facet(v);
  }
}

void IncrementalHull::add_facet(const VertexTuple& v) {
  Facet f;
  f.v = v;
  std::array<const double*, kMaxHullDim> pts{};
  for (std::size_t i = 0; i < d_; ++i) pts[i] = coords(v[i]);
  f.plane = geom::hyperplane_through(std::span<const double* const>(pts.data(), d_), d_);
  const int s = geom::side(f.plane, interior_.data());
  if (s == 0) fail(ErrorCode::InvalidArgument, "hull interior point lies on a facet plane");
  f.orient = -s;
  facets_.push_back(f);
  ++live_;
}

void IncrementalHull::insert_full(std::size_t index) {
  const double* p = coords(index);
  // Facets with p on their plane are replaced too, so points that end up
  // inside a face or edge do not stay behind as vertices.
  std::vector<std::size_t> visible;
  bool beyond = false;
  double added = 0.0;
  for (std::size_t fi = 0; fi < facets_.size(); ++fi) {
    const Facet& f = facets_[fi];
    if (!f.alive) continue;
    const geom::FilteredValue sv = geom::side_filtered(f.plane, p);
    const int s = f.orient * (sv.certain() ? sv.sign() : geom::side(f.plane, p));
    if (s >= 0) visible.push_back(fi);
    if (s > 0) {
      beyond = true;
      added += std::max(0.0, f.orient * sv.value);
    }
  }
  if (!beyond) return;
  volume_ += added * inv_factorial_;

  std::unordered_map<VertexTuple, int, RidgeHash> ridges;
  for (std::size_t fi : visible) {
    Facet& f = facets_[fi];
    for (std::size_t m = 0; m < d_; ++m) {
      VertexTuple key;
      key.fill(UINT32_MAX);
      std::size_t k = 0;
      for (std::size_t i = 0; i < d_; ++i)
        if (i != m) key[k++] = f.v[i];
      std::sort(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(k));
      ++ridges[key];
    }
    f.alive = false;
    --live_;
  }
  // Iterate ridges in a fixed order so facet order does not depend on hashing.
  std::vector<VertexTuple> horizon;
  for (const auto& [key, count] : ridges)
    if (count == 1) horizon.push_back(key);
  std::sort(horizon.begin(), horizon.end());
  for (const VertexTuple& key : horizon) {
    VertexTuple v = key;
    v[d_ - 1] = static_cast<std::uint32_t>(index);
    add_facet(v);
  }
  if (facets_.size() > 2 * live_ + 64) compact();
}

void IncrementalHull::compact() {
  std::erase_if(facets_, [](const Facet& f) { return !f.alive; });
}

HullResult IncrementalHull::result() const {
  HullResult out;
  out.dim = d_;
  if (!full_) {
    out.degenerate = true;
    out.vertex_points = PointCloud(d_, {});
    return out;
  }
  for (const Facet& f : facets_) {
    if (!f.alive) continue;
    HullFacet hf;
    hf.vertices.assign(f.v.begin(), f.v.begin() + static_cast<std::ptrdiff_t>(d_));
    double norm = 0.0;
    for (std::size_t j = 0; j < d_; ++j) norm += f.plane.normal[j] * f.plane.normal[j];
    norm = std::sqrt(norm);
    hf.normal.resize(d_);
    for (std::size_t j = 0; j < d_; ++j) hf.normal[j] = f.orient * f.plane.normal[j] / norm;
    const double* v0 = coords(f.v[0]);
    for (std::size_t j = 0; j < d_; ++j) hf.offset += hf.normal[j] * v0[j];
    out.vertex_indices.insert(out.vertex_indices.end(), hf.vertices.begin(), hf.vertices.end());
    out.facets.push_back(std::move(hf));
  }
  std::sort(out.vertex_indices.begin(), out.vertex_indices.end());
  out.vertex_indices.erase(std::unique(out.vertex_indices.begin(), out.vertex_indices.end()),
                           out.vertex_indices.end());
  out.vertex_points = cloud_->subset(out.vertex_indices);
  out.volume = hull_volume(out);
  return out;
}

HullResult convex_hull(const PointCloud& cloud) {
  require(cloud.dim() >= 1 && cloud.dim() <= kMaxHullDim, "convex hull supports dimensions 1 to 8");
  IncrementalHull hull(cloud);
  if (cloud.size() >= cloud.dim() + 1) {
    std::vector<std::size_t> order(cloud.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::uint64_t state = 0x6d61676e68756c6cull;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[splitmix64(state) % i]);
    for (std::size_t i : order) hull.insert(i);
  }
  return hull.result();
}

double hull_volume(const HullResult& hull) {
  if (hull.degenerate || hull.facets.empty()) return 0.0;
  const std::size_t d = hull.dim;
  std::vector<double> c(d, 0.0);
  const std::size_t nv = hull.vertex_points.size();
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = 0; j < d; ++j) c[j] += hull.vertex_points.point(i)[j];
  for (double& x : c) x /= static_cast<double>(nv);

  auto vertex = [&](std::size_t idx) {
    auto it = std::lower_bound(hull.vertex_indices.begin(), hull.vertex_indices.end(), idx);
    return hull.vertex_points.point(static_cast<std::size_t>(it - hull.vertex_indices.begin()));
  };
  std::array<double, kMaxHullDim * kMaxHullDim> m{};
  double total = 0.0;
  for (const HullFacet& f : hull.facets) {
    for (std::size_t i = 0; i < d; ++i) {
      auto v = vertex(f.vertices[i]);
      for (std::size_t j = 0; j < d; ++j) m[i * d + j] = v[j] - c[j];
    }
    total += std::abs(geom::filtered_determinant(std::span<const double>(m.data(), d * d), d).value);
  }
  return total / factorial(d);
}

double unit_ball_volume(std::size_t d) {
  require(d >= 1, "unit_ball_volume: dimension must be positive");
  const double h = static_cast<double>(d) / 2.0;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

double geometric_tolerance(const PointCloud& cloud) {
  double diam = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double dd = distance(cloud.point(i), cloud.point(j));
      diam = std::max(diam, dd);
    }
  return 1e-9 * diam;
}

bool hull_contains(const HullResult& hull, std::span<const double> p, double tol) {
  for (const HullFacet& f : hull.facets) {
    double s = 0.0;
    for (std::size_t j = 0; j < hull.dim; ++j) s += f.normal[j] * p[j];
    if (s > f.offset + tol) return false;
  }
  return true;
}

std::string format_off(const HullResult& hull) {
  std::string out;
  if (hull.dim == 3) {
    out += "OFF\n";
  } else {
    out += "nOFF\n" + std::to_string(hull.dim) + "\n";
  }
  out += std::to_string(hull.vertex_indices.size()) + " " + std::to_string(hull.facets.size()) + " 0\n";
  for (std::size_t i = 0; i < hull.vertex_points.size(); ++i) {
    auto p = hull.vertex_points.point(i);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j) out += ' ';
      out += format_double(p[j]);
    }
    out += '\n';
  }
  for (const HullFacet& f : hull.facets) {
    out += std::to_string(f.vertices.size());
    for (std::size_t v : f.vertices) {
      auto it = std::lower_bound(hull.vertex_indices.begin(), hull.vertex_indices.end(), v);
      out += ' ' + std::to_string(it - hull.vertex_indices.begin());
    }
    out += '\n';
  }
  return out;
}

}  // namespace maghull
