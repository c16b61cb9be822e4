#include "maghull/quadrature.hpp"

#include <cmath>

#include "maghull/error.hpp"

namespace maghull {

std::string_view to_string(QuadratureKind kind) {
  switch (kind) {
    case QuadratureKind::GaussLaguerre: return "gauss-laguerre";
    case QuadratureKind::LogTrapezoid: return "log-trapezoid";
  }
  return "unknown";
}

QuadratureRule QuadratureRule::gauss_laguerre(std::size_t order) {
  require(order >= 1 && order <= 512, "Gauss-Laguerre order must be in [1, 512]");
  using real = long double;
  const int n = static_cast<int>(order);
  std::vector<real> x(order);
  QuadratureRule rule;
  rule.kind = QuadratureKind::GaussLaguerre;
  rule.nodes.resize(order);
  rule.weights.resize(order);

  real z = 0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0L / (1.0L + 2.4L * n);
    } else if (i == 1) {
      z += 15.0L / (1.0L + 2.5L * n);
    } else {
      const real ai = i - 1;
      z += ((1.0L + 2.55L * ai) / (1.9L * ai)) * (z - x[i - 2]);
    }
    real p1 = 0, p2 = 0, pp = 0;
    bool converged = false;
    real prev_step = INFINITY;
    for (int it = 0; it < 100; ++it) {
      p1 = 1.0L;
      p2 = 0.0L;
      for (int j = 1; j <= n; ++j) {
        const real p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1 - z) * p2 - (j - 1) * p3) / j;
      }
      pp = (n * p1 - n * p2) / z;
      const real z1 = z;
      z = z1 - p1 / pp;
      // Stop at 1e-17 relative, or once the step stalls at the rounding floor
      // (the smallest roots of high orders only reach ~2e-16).
      const real step = std::fabs(z - z1);
      if (step <= 1e-17L * std::fabs(z) || (step <= 1e-14L * std::fabs(z) && step >= prev_step)) {
        converged = true;
        break;
      }
      prev_step = step;
    }
    if (!converged) fail(ErrorCode::InvalidArgument, "Gauss-Laguerre Newton iteration did not converge");
    // Re-evaluate at the converged root for the weight.
    p1 = 1.0L;
    p2 = 0.0L;
    for (int j = 1; j <= n; ++j) {
      const real p3 = p2;
      p2 = p1;
      p1 = ((2 * j - 1 - z) * p2 - (j - 1) * p3) / j;
    }
    pp = (n * p1 - n * p2) / z;
    x[i] = z;
    rule.nodes[i] = static_cast<double>(z);
    rule.weights[i] = static_cast<double>(-1.0L / (pp * n * p2));
  }
  for (std::size_t i = 0; i < order; ++i) {
    // weights of the largest roots underflow to zero beyond order ~180
    if (!(rule.weights[i] >= 0.0) || (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1])))
      fail(ErrorCode::InvalidArgument, "Gauss-Laguerre construction lost root ordering");
  }
  return rule;
}

QuadratureRule QuadratureRule::log_trapezoid(std::size_t order, double lower, double upper) {
  require(order >= 2, "log-trapezoid order must be at least 2");
  require(lower > 0.0 && upper > lower, "log-trapezoid range must satisfy 0 < lower < upper");
  QuadratureRule rule;
  rule.kind = QuadratureKind::LogTrapezoid;
  rule.lower = lower;
  rule.upper = upper;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double span = std::log(upper / lower);
  const double h = span / static_cast<double>(order - 1);
  for (std::size_t k = 0; k < order; ++k) {
    const double t = k + 1 == order ? upper : lower * std::exp(h * static_cast<double>(k));
    const double end = (k == 0 || k + 1 == order) ? 0.5 : 1.0;
    rule.nodes[k] = t;
    rule.weights[k] = end * h * t * std::exp(-t);
  }
  rule.weights[0] += -std::expm1(-lower);
  return rule;
}

QuadratureRule QuadratureRule::doubled() const {
  return kind == QuadratureKind::GaussLaguerre ? gauss_laguerre(2 * order()) : log_trapezoid(2 * order(), lower, upper);
}

}  // namespace maghull
