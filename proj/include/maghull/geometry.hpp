#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "maghull/linalg.hpp"

namespace maghull {

/// Two points closer than this (Euclidean) are treated as duplicates.
inline constexpr double kDuplicateTolerance = 1e-12;

/// Ordered finite set of points in R^d. Coordinates are stored row-major and
/// validated finite on construction; index order is stable.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t dim, std::vector<double> coords, std::vector<std::string> labels = {});

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const noexcept { return {coords_.data() + i * dim_, dim_}; }
  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Points `indices`, in that order (labels follow).
  PointCloud subset(std::span<const std::size_t> indices) const;

  bool operator==(const PointCloud&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<std::string> labels_;
};

/// Every coordinate multiplied by t.
PointCloud scale_coordinates(const PointCloud& cloud, double t);

double distance(std::span<const double> a, std::span<const double> b);

/// Symmetric matrix of Euclidean distances with zero diagonal. Throws
/// DuplicatePoints when two distinct indices are closer than
/// kDuplicateTolerance.
Matrix pairwise_distances(const PointCloud& cloud);

/// Largest entry of a distance matrix.
double diameter(const Matrix& distances);
/// Smallest off-diagonal entry of a distance matrix (+inf for N < 2).
double min_separation(const Matrix& distances);

/// Similarity matrix exp(-t * d(x_i, x_j)) of the scaled space tX.
class SimilarityMatrix {
 public:
  std::size_t size() const noexcept { return entries_.rows(); }
  double scale() const noexcept { return scale_; }
  const Matrix& entries() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }

  /// Exact symmetric copy with unit diagonal, built from precomputed distances.
  static SimilarityMatrix from_distances(const Matrix& distances, double t);

 private:
  SimilarityMatrix(Matrix entries, double scale) : entries_(std::move(entries)), scale_(scale) {}

  Matrix entries_;
  double scale_ = 1.0;
};

SimilarityMatrix build_similarity(const PointCloud& cloud, double t);

}  // namespace maghull
