#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "maghull/geometry.hpp"
#include "maghull/hull.hpp"
#include "maghull/moments.hpp"

namespace maghull {

/// Which moment the removal test compares against eps / (d i |X|), with i the
/// number of removed points (lowest moments first).
///  Derived: the largest removed moment, mu0 sorted[i-1].
///  Paper:   the first kept moment, mu0 sorted[i].
enum class ThresholdConvention { Derived, Paper };

std::string_view to_string(ThresholdConvention c);
ThresholdConvention parse_threshold_convention(std::string_view text);

struct ThresholdPoint {
  std::size_t i;     ///< removal count
  double mu0;        ///< moment tested for this count
  double threshold;  ///< eps / (d i |X|)
};

struct FilterReport {
  std::vector<std::size_t> kept;     ///< ascending index
  std::vector<std::size_t> removed;  ///< ascending index
  double epsilon = 0.0;
  ThresholdConvention convention = ThresholdConvention::Derived;
  std::vector<ThresholdPoint> threshold_curve;
  double magnitude_at_one = 0.0;
};

/// Indices sorted by ascending mu0, ties by index.
std::vector<std::size_t> ascending_moment_order(const std::vector<double>& mu0);

/// Removes the largest lowest-moment prefix passing the threshold test, found
/// by binary search. At least d+1 points are always kept (none are removed
/// from a cloud of d+1 or fewer). epsilon = +inf removes everything allowed.
FilterReport filter_by_moment(const PointCloud& cloud, const MomentVector& moments, double epsilon,
                              double magnitude_at_one, ThresholdConvention convention = ThresholdConvention::Derived);

/// As above with |X| at t = 1 solved here.
FilterReport filter_by_moment(const PointCloud& cloud, const MomentVector& moments, double epsilon,
                              ThresholdConvention convention = ThresholdConvention::Derived);

struct ApproximateHull {
  HullResult hull;  ///< indices refer to the input cloud
  FilterReport report;
};

ApproximateHull approximate_hull(const PointCloud& cloud, double epsilon, const QuadratureRule& rule,
                                 ThresholdConvention convention = ThresholdConvention::Derived,
                                 const MomentOptions& options = {});

/// Hull of cloud.subset(indices) with indices mapped back to the cloud.
HullResult hull_of_subset(const PointCloud& cloud, const std::vector<std::size_t>& indices);

struct PrefixPoint {
  std::size_t i;
  double volume;     ///< Vol(Conv(X_{<=i}))
  double magnitude;  ///< |X_{<=i}| at t = 1
};

/// Prefixes of the descending-moment order (ties by index), i = 1..N.
/// Volumes come from one incremental hull; magnitudes from one Cholesky
/// factor of the permuted similarity matrix, since the leading i x i block of
/// L factors the leading block of zeta and |X_{<=i}| = sum_{k<=i} (L^{-1} 1)_k^2.
std::vector<PrefixPoint> moment_prefix_curve(const PointCloud& cloud, const MomentVector& moments,
                                             const Deadline& deadline = std::nullopt);

/// Smallest i with volume >= fraction * final volume; 0 for an empty or
/// zero-volume curve.
std::size_t first_index_reaching(const std::vector<PrefixPoint>& curve, double fraction);

}  // namespace maghull
