#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <cstdint>
#include <string>
#include <vector>

#include "maghull/geometry.hpp"
#include "maghull/predicates.hpp"

namespace maghull {

inline constexpr std::size_t kMaxHullDim = geom::kMaxDim;

struct HullFacet {
  std::vector<std::size_t> vertices;  ///< d indices into the source cloud
  std::vector<double> normal;         ///< unit outward normal
  double offset = 0.0;                ///< normal . x = offset on the facet
};

/// Convex hull of a cloud. Facets are simplices (d vertices each); coplanar
/// input yields a triangulated face.
struct HullResult {
  std::size_t dim = 0;
  std::vector<std::size_t> vertex_indices;  ///< sorted
  PointCloud vertex_points;                 ///< coordinates of vertex_indices, same order
  std::vector<HullFacet> facets;
  double volume = 0.0;
  /// Affinely dependent input: no facets, zero volume.
  bool degenerate = false;
};

/// Incremental hull. Points are inserted one at a time; the running volume
/// after each insertion is the volume of the hull of all points inserted so
/// far. Until the inserted points span R^d they are buffered and the volume
/// is 0. Visibility uses exact orientation signs.
class IncrementalHull {
 public:
  explicit IncrementalHull(const PointCloud& cloud);

  void insert(std::size_t index);

  bool full_dimensional() const noexcept { return full_; }
  double volume() const noexcept { return volume_; }
  std::size_t live_facets() const noexcept { return live_; }

  HullResult result() const;

 private:
  struct Facet {
    std::array<std::uint32_t, kMaxHullDim> v{};
    geom::Hyperplane plane;
    int orient = 1;  ///< outward side is orient * side(p) > 0
    bool alive = true;
  };

  const double* coords(std::size_t i) const { return cloud_->point(i).data(); }
  void build_simplex();
  void add_facet(const std::array<std::uint32_t, kMaxHullDim>& v);
  void insert_full(std::size_t index);
  void compact();

  const PointCloud* cloud_;
  std::size_t d_;
  bool full_ = false;
  double volume_ = 0.0;
  double inv_factorial_ = 1.0;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> pending_;
  std::array<double, kMaxHullDim> interior_{};
  std::vector<Facet> facets_;
  std::size_t live_ = 0;
};

/// Hull of the whole cloud, inserting points in a fixed pseudo-random order
/// (deterministic for a given input order). N < d+1 or affinely dependent
/// input returns a degenerate result.
HullResult convex_hull(const PointCloud& cloud);

/// Sum of |det|/d! over the fan of simplices from the vertex centroid to each
/// facet.
double hull_volume(const HullResult& hull);

/// pi^{d/2} / Gamma(d/2 + 1)
double unit_ball_volume(std::size_t d);

/// Containment tolerance: 1e-9 * diameter.
double geometric_tolerance(const PointCloud& cloud);

/// normal . p <= offset + tol for every facet.
bool hull_contains(const HullResult& hull, std::span<const double> p, double tol);

/// OFF text for d = 3, nOFF (dimension line added) otherwise.
std::string format_off(const HullResult& hull);

}  // namespace maghull
