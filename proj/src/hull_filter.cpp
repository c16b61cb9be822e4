#include "maghull/hull_filter.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "maghull/error.hpp"
#include "maghull/magnitude.hpp"

namespace maghull {

std::string_view to_string(ThresholdConvention c) {
  return c == ThresholdConvention::Paper ? "paper" : "derived";
}

ThresholdConvention parse_threshold_convention(std::string_view text) {
  if (text == "derived") return ThresholdConvention::Derived;
  if (text == "paper") return ThresholdConvention::Paper;
  fail(ErrorCode::InvalidArgument, "threshold convention must be 'paper' or 'derived'");
}

std::vector<std::size_t> ascending_moment_order(const std::vector<double>& mu0) {
  std::vector<std::size_t> order(mu0.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mu0[a] < mu0[b] || (mu0[a] == mu0[b] && a < b);
  });
  return order;
}

FilterReport filter_by_moment(const PointCloud& cloud, const MomentVector& moments, double epsilon,
                              double magnitude_at_one, ThresholdConvention convention) {
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dim();
  require(moments.mu0.size() == n, "filter: moment vector does not match the cloud");
  require(epsilon >= 0.0, "filter: epsilon must be nonnegative");
  require(magnitude_at_one > 0.0, "filter: magnitude must be positive");

  const std::vector<std::size_t> order = ascending_moment_order(moments.mu0);
  const std::size_t max_removed = n > d + 1 ? n - (d + 1) : 0;

  auto tested = [&](std::size_t i) {
    return convention == ThresholdConvention::Derived ? moments.mu0[order[i - 1]] : moments.mu0[order[i]];
  };
  auto threshold = [&](std::size_t i) {
    return epsilon / (static_cast<double>(d) * static_cast<double>(i) * magnitude_at_one);
  };
  auto passes = [&](std::size_t i) { return tested(i) <= threshold(i); };

  FilterReport report;
  report.epsilon = epsilon;
  report.convention = convention;
  report.magnitude_at_one = magnitude_at_one;
  for (std::size_t i = 1; i <= max_removed; ++i) report.threshold_curve.push_back({i, tested(i), threshold(i)});

  // passes() is true on a prefix of 1..max_removed: tested(i) is nondecreasing
  // and threshold(i) is nonincreasing.
  std::size_t lo = 0, hi = max_removed;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (passes(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
#ifndef NDEBUG
  for (std::size_t i = 1; i <= max_removed; ++i) assert(passes(i) == (i <= lo));
#endif

  report.removed.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(lo));
  report.kept.assign(order.begin() + static_cast<std::ptrdiff_t>(lo), order.end());
  std::sort(report.removed.begin(), report.removed.end());
  std::sort(report.kept.begin(), report.kept.end());
  return report;
}

FilterReport filter_by_moment(const PointCloud& cloud, const MomentVector& moments, double epsilon,
                              ThresholdConvention convention) {
  const double mag = solve_weights(build_similarity(cloud, 1.0)).magnitude;
  return filter_by_moment(cloud, moments, epsilon, mag, convention);
}

HullResult hull_of_subset(const PointCloud& cloud, const std::vector<std::size_t>& indices) {
  HullResult hull = convex_hull(cloud.subset(indices));
  for (std::size_t& v : hull.vertex_indices) v = indices[v];
  for (HullFacet& f : hull.facets)
    for (std::size_t& v : f.vertices) v = indices[v];
  // indices is ascending, so vertex_indices stays sorted and aligned with vertex_points.
  return hull;
}

ApproximateHull approximate_hull(const PointCloud& cloud, double epsilon, const QuadratureRule& rule,
                                 ThresholdConvention convention, const MomentOptions& options) {
  const MomentVector moments = zeroth_moments(cloud, rule, options);
  ApproximateHull out;
  out.report = filter_by_moment(cloud, moments, epsilon, convention);
  out.hull = hull_of_subset(cloud, out.report.kept);
  return out;
}

std::vector<PrefixPoint> moment_prefix_curve(const PointCloud& cloud, const MomentVector& moments,
                                             const Deadline& deadline) {
  const std::size_t n = cloud.size();
  require(moments.mu0.size() == n, "prefix curve: moment vector does not match the cloud");
  std::vector<std::size_t> order = ascending_moment_order(moments.mu0);
  // Descending moments, ties still by ascending index.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return moments.mu0[a] > moments.mu0[b]; });

  const PointCloud permuted = cloud.subset(order);
  const SimilarityMatrix sim = build_similarity(permuted, 1.0);
  const CholeskyFactor factor = CholeskyFactor::factor(sim.entries());
  std::vector<double> y(n, 1.0);
  factor.forward_in_place(y);

  std::vector<PrefixPoint> curve;
  curve.reserve(n);
  IncrementalHull hull(cloud);
  double mag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (deadline && (i & 63) == 0 && std::chrono::steady_clock::now() > *deadline)
      fail(ErrorCode::Timeout, "deadline passed during prefix hull construction");
    hull.insert(order[i]);
    mag += y[i] * y[i];
    curve.push_back({i + 1, hull.volume(), mag});
  }
  return curve;
}

std::size_t first_index_reaching(const std::vector<PrefixPoint>& curve, double fraction) {
  if (curve.empty() || !(curve.back().volume > 0.0)) return 0;
  const double target = fraction * curve.back().volume;
  for (const PrefixPoint& p : curve)
    if (p.volume >= target) return p.i;
  return curve.back().i;
}

}  // namespace maghull
