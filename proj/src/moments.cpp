#include "maghull/moments.hpp"

#include <cmath>
#include <limits>

#include "maghull/error.hpp"
#include "maghull/parallel.hpp"
#include "maghull/textio.hpp"

namespace maghull {
namespace {

// exp(-x) is exactly zero in double below this argument (both kernel tables).
constexpr double kExpUnderflow = 745.2;

}  // namespace

NodeWeights evaluate_nodes(const PointCloud& cloud, const QuadratureRule& rule, const MomentOptions& options) {
  require(!cloud.empty(), "moments: empty cloud");
  require(rule.order() > 0, "moments: empty quadrature rule");
  const std::size_t n = cloud.size();
  const Matrix distances = pairwise_distances(cloud);
  const double separation = min_separation(distances);
  const std::uint64_t key = options.cache ? SolveCache::fingerprint(cloud) : 0;

  NodeWeights out{Matrix(rule.order(), n), std::vector<double>(rule.order())};
  parallel_for(rule.order(), options.threads, [&](std::size_t k) {
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline)
      fail(ErrorCode::Timeout, "deadline passed during moment quadrature");
    const double t = rule.nodes[k];
    auto row = out.weights.row(k);
    if (n == 1 || t * separation > kExpUnderflow) {
      std::fill(row.begin(), row.end(), 1.0);
      out.magnitude[k] = static_cast<double>(n);
      return;
    }
    try {
      std::shared_ptr<const WeightSolve> solve = options.cache ? options.cache->find(key, t) : nullptr;
      if (!solve) {
        solve = std::make_shared<const WeightSolve>(
            solve_weights_with_factor(SimilarityMatrix::from_distances(distances, t)));
        if (options.cache) options.cache->insert(key, t, solve);
      }
      std::copy(solve->weights.weights.begin(), solve->weights.weights.end(), row.begin());
      out.magnitude[k] = solve->weights.magnitude;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Timeout) throw;
      throw Error(e.code(), e.message() + " (quadrature node " + std::to_string(k) + ", t=" + format_double(t) + ")");
    }
  });
  return out;
}

std::vector<double> weighted_square_sums(const NodeWeights& nodes, const QuadratureRule& rule,
                                         const std::vector<double>& factor) {
  const std::size_t n = nodes.weights.cols();
  std::vector<double> out(n);
  std::vector<double> terms(rule.order());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < rule.order(); ++k) {
      const double w = nodes.weights(k, i);
      terms[k] = factor[k] * rule.weights[k] * w * w;
    }
    out[i] = compensated_sum(terms);
  }
  return out;
}

MomentVector zeroth_moments(const PointCloud& cloud, const QuadratureRule& rule, const MomentOptions& options) {
  const std::vector<double> ones(rule.order(), 1.0);
  MomentVector mv;
  mv.mu0 = weighted_square_sums(evaluate_nodes(cloud, rule, options), rule, ones);
  mv.rule = rule;
  mv.estimated_error = std::numeric_limits<double>::quiet_NaN();
  if (options.estimate_error) {
    const QuadratureRule fine = rule.doubled();
    const auto mu_fine =
        weighted_square_sums(evaluate_nodes(cloud, fine, options), fine, std::vector<double>(fine.order(), 1.0));
    double err = 0.0;
    for (std::size_t i = 0; i < mv.mu0.size(); ++i) {
      const double diff = std::abs(mu_fine[i] - mv.mu0[i]);
      err = std::max(err, diff);
      if (diff > options.divergence_tolerance * std::abs(mu_fine[i])) {
        fail(ErrorCode::QuadratureDivergence,
             "moment of point " + std::to_string(i) + " changes from " + format_double(mv.mu0[i]) + " to " +
                 format_double(mu_fine[i]) + " when the quadrature order doubles to " +
                 std::to_string(fine.order()));
      }
    }
    mv.estimated_error = err;
  }
  return mv;
}

std::vector<double> higher_moments(const PointCloud& cloud, unsigned n, const QuadratureRule& rule,
                                   const MomentOptions& options) {
  std::vector<double> factor(rule.order());
  for (std::size_t k = 0; k < rule.order(); ++k) factor[k] = std::pow(rule.nodes[k], static_cast<double>(n));
  return weighted_square_sums(evaluate_nodes(cloud, rule, options), rule, factor);
}

std::vector<double> laplace_moment(const PointCloud& cloud, double s, const QuadratureRule& rule,
                                   const MomentOptions& options) {
  require(s >= 0.0 && std::isfinite(s), "laplace_moment: s must be finite and nonnegative");
  std::vector<double> factor(rule.order());
  for (std::size_t k = 0; k < rule.order(); ++k) factor[k] = std::exp(-s * rule.nodes[k]);
  return weighted_square_sums(evaluate_nodes(cloud, rule, options), rule, factor);
}

double magnitude_moment(const PointCloud& cloud, const QuadratureRule& rule, const MomentOptions& options) {
  const NodeWeights nodes = evaluate_nodes(cloud, rule, options);
  std::vector<double> terms(rule.order());
  for (std::size_t k = 0; k < rule.order(); ++k) terms[k] = rule.weights[k] * nodes.magnitude[k];
  return compensated_sum(terms);
}

}  // namespace maghull
