#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "maghull/datagen.hpp"
#include "maghull/geometry.hpp"

namespace testing {

inline maghull::PointCloud random_cloud(maghull::Rng& rng, std::size_t n, std::size_t d, double box = 1.0) {
  std::vector<double> c(n * d);
  for (double& x : c) x = rng.uniform(-box, box);
  return maghull::PointCloud(d, std::move(c));
}

/// Uniform in [0,1]^d with every pair at least `sep` apart (rejection).
inline maghull::PointCloud separated_cloud(maghull::Rng& rng, std::size_t n, std::size_t d, double sep) {
  std::vector<double> c;
  for (std::size_t attempts = 0; c.size() < n * d; ++attempts) {
    if (attempts > 1000000) throw std::runtime_error("separated_cloud: separation too large for n points");
    std::vector<double> p(d);
    for (double& x : p) x = rng.uniform();
    bool ok = true;
    for (std::size_t i = 0; ok && i < c.size() / d; ++i) {
      double s = 0;
      for (std::size_t k = 0; k < d; ++k) s += (c[i * d + k] - p[k]) * (c[i * d + k] - p[k]);
      ok = std::sqrt(s) >= sep;
    }
    if (ok) c.insert(c.end(), p.begin(), p.end());
  }
  return maghull::PointCloud(d, std::move(c));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing
