#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Golub-Welsch: eigenvalues of the Laguerre Jacobi matrix are the nodes, and
// the squared first eigenvector components the weights (total mass 1).
struct Rule {
  std::vector<double> nodes, weights;
};

inline Rule golub_welsch_laguerre(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    j(k, k) = 2.0 * k + 1.0;
    if (k + 1 < n) j(k, k + 1) = j(k + 1, k) = k + 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Rule r;
  for (int k = 0; k < n; ++k) {
    r.nodes.push_back(es.eigenvalues()(k));
    r.weights.push_back(es.eigenvectors()(0, k) * es.eigenvectors()(0, k));
  }
  return r;
}

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

/// Adaptive Simpson on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson_step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50);
}

/// int_0^inf f, split into unit panels up to `upper`; f must decay like e^{-t}.
inline double integrate_half_line(const std::function<double(double)>& f, double upper = 60.0) {
  double s = 0.0;
  for (double a = 0.0; a < upper; a += 1.0) s += integrate(f, a, a + 1.0, 1e-15);
  return s;
}

}  // namespace oracle
