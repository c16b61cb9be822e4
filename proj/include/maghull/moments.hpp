#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <vector>

#include "maghull/geometry.hpp"
#include "maghull/linalg.hpp"
#include "maghull/magnitude.hpp"
#include "maghull/quadrature.hpp"

namespace maghull {

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

struct MomentOptions {
  /// Worker threads over quadrature nodes.
  unsigned threads = 1;
  /// Compare against the rule of twice the order (costs 2x the solves).
  bool estimate_error = true;
  /// Entrywise relative change under order doubling that raises
  /// QuadratureDivergence.
  double divergence_tolerance = 1e-4;
  SolveCache* cache = nullptr;
  /// Checked before each node solve; exceeded raises Timeout.
  Deadline deadline;
};

/// Per-node weight vectors w_{t_k} for every point.
struct NodeWeights {
  Matrix weights;                 ///< row k holds w_{t_k}(x_i)
  std::vector<double> magnitude;  ///< |t_k X|
};

/// Solves zeta_{t_k X} w = 1 at each node. Nodes with t_k * min separation
/// beyond exp underflow have zeta = I exactly and get w = 1 without a solve.
NodeWeights evaluate_nodes(const PointCloud& cloud, const QuadratureRule& rule, const MomentOptions& options = {});

struct MomentVector {
  std::vector<double> mu0;
  QuadratureRule rule;
  /// max_i |mu0_i(rule) - mu0_i(rule doubled)|; NaN when not estimated.
  double estimated_error = 0.0;
};

/// mu0(x) = int_0^inf e^{-t} w_t(x)^2 dt.
MomentVector zeroth_moments(const PointCloud& cloud, const QuadratureRule& rule, const MomentOptions& options = {});

/// mu_n(x) = int_0^inf t^n e^{-t} w_t(x)^2 dt.
std::vector<double> higher_moments(const PointCloud& cloud, unsigned n, const QuadratureRule& rule,
                                   const MomentOptions& options = {});

/// int_0^inf e^{-(s+1)t} w_t(x)^2 dt for s >= 0.
std::vector<double> laplace_moment(const PointCloud& cloud, double s, const QuadratureRule& rule,
                                   const MomentOptions& options = {});

/// int_0^inf e^{-t} |tX| dt.
double magnitude_moment(const PointCloud& cloud, const QuadratureRule& rule, const MomentOptions& options = {});

/// Weighted node sums: out[i] = sum_k factor[k] * rule.weights[k] * w_k(x_i)^2.
std::vector<double> weighted_square_sums(const NodeWeights& nodes, const QuadratureRule& rule,
                                         const std::vector<double>& factor);

}  // namespace maghull
