#include "maghull/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "maghull/error.hpp"
#include "maghull/simd/fp_env.hpp"

namespace maghull {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords, std::vector<std::string> labels)
    : dim_(dim), coords_(std::move(coords)), labels_(std::move(labels)) {
  require(dim_ >= 1, "PointCloud: dimension must be positive");
  require(coords_.size() % dim_ == 0, "PointCloud: coordinate count is not a multiple of the dimension");
  require(labels_.empty() || labels_.size() == size(), "PointCloud: label count does not match point count");
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (!std::isfinite(coords_[k])) {
      std::ostringstream os;
      os << "coordinate " << k % dim_ << " of point " << k / dim_ << " is not finite";
      fail(ErrorCode::NonFinite, os.str());
    }
  }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  require(!rows.empty(), "PointCloud::from_rows: no rows");
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    require(r.size() == dim, "PointCloud::from_rows: ragged rows");
    coords.insert(coords.end(), r.begin(), r.end());
  }
  return PointCloud(dim, std::move(coords));
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
  std::vector<double> coords;
  coords.reserve(indices.size() * dim_);
  std::vector<std::string> labels;
  for (std::size_t i : indices) {
    require(i < size(), "PointCloud::subset: index out of range");
    auto p = point(i);
    coords.insert(coords.end(), p.begin(), p.end());
    if (!labels_.empty()) labels.push_back(labels_[i]);
  }
  return PointCloud(dim_, std::move(coords), std::move(labels));
}

PointCloud scale_coordinates(const PointCloud& cloud, double t) {
  std::vector<double> coords = cloud.coords();
  for (double& c : coords) c *= t;
  return PointCloud(cloud.dim(), std::move(coords), cloud.labels());
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

Matrix pairwise_distances(const PointCloud& cloud) {
  require(!cloud.empty(), "pairwise_distances: empty cloud");
  const std::size_t n = cloud.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double v = distance(cloud.point(i), cloud.point(j));
      if (v < kDuplicateTolerance) {
        std::ostringstream os;
        os << "points " << j << " and " << i << " are closer than " << kDuplicateTolerance;
        fail(ErrorCode::DuplicatePoints, os.str());
      }
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

double diameter(const Matrix& distances) {
  double m = 0.0;
  for (std::size_t i = 0; i < distances.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) m = std::max(m, distances(i, j));
  return m;
}

double min_separation(const Matrix& distances) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < distances.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) m = std::min(m, distances(i, j));
  return m;
}

SimilarityMatrix SimilarityMatrix::from_distances(const Matrix& distances, double t) {
  require(t > 0.0 && std::isfinite(t), "similarity scale must be positive and finite");
  const std::size_t n = distances.rows();
  const auto& k = simd::active();
  simd::FlushSubnormals ftz;
  Matrix z(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k.exp_neg_scaled(distances.row(i).data(), t, z.row(i).data(), i);
    z(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) z(j, i) = z(i, j);
  }
  return SimilarityMatrix(std::move(z), t);
}

SimilarityMatrix build_similarity(const PointCloud& cloud, double t) {
  require(t > 0.0 && std::isfinite(t), "build_similarity: t must be positive and finite");
  return SimilarityMatrix::from_distances(pairwise_distances(cloud), t);
}

}  // namespace maghull
