#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maghull/geometry.hpp"
#include "maghull/linalg.hpp"
#include "maghull/magnitude.hpp"

namespace maghull {

/// Partition of {0..N-1} into kept and removed indices, both sorted.
struct IndexSplit {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> removed;
  std::size_t parent_size = 0;

  /// Validates `removed` (in range, no repeats) and derives `kept`.
  static IndexSplit from_removed(std::size_t parent_size, std::vector<std::size_t> removed);
};

/// S = A_P - A_{P,K} A_K^{-1} A_{K,P} for removed block P and kept block K.
struct SchurComplement {
  Matrix matrix;
  double determinant = 0.0;

  double trace() const;
};

/// Schur complement of the kept block in `sim`, indexed by split.removed.
/// Requires a nonempty removed set and a nonempty kept set.
SchurComplement schur_complement(const SimilarityMatrix& sim, const IndexSplit& split);

/// Magnitude of the kept subset from the parent's weights:
/// |X| - w[P]^T (A / A_K) w[P]. An empty removed set returns |X|.
double restricted_magnitude(const WeightVector& weights, const SimilarityMatrix& sim, const IndexSplit& split);

struct RestrictionBounds {
  double upper;      ///< |X|
  double det_upper;  ///< |X| - |P| det(S) min_{p in P} w_p^2
  double lower;      ///< |X| - |P| max_{p in P} w_p^2
  double trace_lower;  ///< |X| - tr(S) sum_{p in P} w_p^2
};

/// restricted magnitude <= det_upper <= upper, and trace_lower <= restricted
/// magnitude. `lower` can exceed the
/// restricted magnitude because w[P]^T S w[P] is not sum lambda_i w_i^2 unless
/// w[P] is an eigenvector of S. trace_lower uses w^T S w <= lambda_max |w|^2.
RestrictionBounds restriction_bounds(const WeightVector& weights, const SimilarityMatrix& sim,
                                     const IndexSplit& split);

/// Union Z of two clouds. Z lists X's points in order, then the points of Y
/// that are not in X, in Y's order.
struct CloudUnion {
  PointCloud cloud;
  std::vector<std::size_t> x_in_z;  ///< position in Z of each point of X
  std::vector<std::size_t> y_in_z;  ///< position in Z of each point of Y
};

/// Overlap is exact coordinate equality; points of Y that are within the
/// duplicate tolerance of a point of X without being equal raise
/// OverlapAmbiguity.
CloudUnion unite(const PointCloud& x, const PointCloud& y);

/// Weight vector of X u Y (ordered as in `unite`) from the weights of X and Y,
/// via the Schur complements of the Y block and of the X-only block in zeta_Z.
WeightVector union_weights(const PointCloud& x, const PointCloud& y, const WeightVector& wx,
                           const WeightVector& wy);

}  // namespace maghull
