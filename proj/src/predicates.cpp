#include "maghull/predicates.hpp"

#include <gmpxx.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <vector>

#include "maghull/error.hpp"

namespace maghull::geom {
namespace {

constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;

constexpr double gamma(double m) { return m * kUnit / (1.0 - m * kUnit); }

std::atomic<std::uint64_t> g_exact{0};

// Sign of the determinant of a k x k rational matrix (destroyed).
int rational_det_sign(std::vector<mpq_class>& m, std::size_t k) {
  int sign = 1;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    while (piv < k && sgn(m[piv * k + c]) == 0) ++piv;
    if (piv == k) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < k; ++j) std::swap(m[c * k + j], m[piv * k + j]);
      sign = -sign;
    }
    if (sgn(m[c * k + c]) < 0) sign = -sign;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (sgn(m[r * k + c]) == 0) continue;
      const mpq_class f = m[r * k + c] / m[c * k + c];
      for (std::size_t j = c; j < k; ++j) m[r * k + j] -= f * m[c * k + j];
    }
  }
  return sign;
}

std::size_t rational_rank(std::vector<mpq_class>& m, std::size_t rows, std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && sgn(m[piv * cols + c]) == 0) ++piv;
    if (piv == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m[rank * cols + j], m[piv * cols + j]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (sgn(m[r * cols + c]) == 0) continue;
      const mpq_class f = m[r * cols + c] / m[rank * cols + c];
      for (std::size_t j = c; j < cols; ++j) m[r * cols + j] -= f * m[rank * cols + j];
    }
    ++rank;
  }
  return rank;
}

int exact_difference_det(std::span<const double* const> rows_from, const double* origin, std::size_t d) {
  g_exact.fetch_add(1, std::memory_order_relaxed);
  std::vector<mpq_class> m(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m[i * d + j] = mpq_class(rows_from[i][j]) - mpq_class(origin[j]);
  return rational_det_sign(m, d);
}

}  // namespace

FilteredValue filtered_determinant(std::span<const double> m, std::size_t k, double input_rel_err) {
  require(k <= kMaxDim && m.size() >= k * k, "filtered_determinant: bad size");
  if (k == 0) return {1.0, 0.0};
  std::array<double, kMaxDim * kMaxDim> a{};
  double norm_product = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += m[i * k + j] * m[i * k + j];
    const double r = std::sqrt(s);
    // A zero row is exactly zero: the determinant is exactly 0.
    if (r == 0.0) return {0.0, 0.0};
    for (std::size_t j = 0; j < k; ++j) a[i * k + j] = m[i * k + j] / r;
    norm_product *= r;
  }
  double det = 1.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::abs(a[r * k + c]) > std::abs(a[piv * k + c])) piv = r;
    if (piv != c) {
      for (std::size_t j = 0; j < k; ++j) std::swap(a[c * k + j], a[piv * k + j]);
      det = -det;
    }
    const double p = a[c * k + c];
    det *= p;
    if (p == 0.0) break;
    for (std::size_t r = c + 1; r < k; ++r) {
      const double f = a[r * k + c] / p;
      for (std::size_t j = c + 1; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
    }
  }
  const double kd = static_cast<double>(k);
  // Backward error of elimination with growth <= 2^{k-1}, as a row-norm bound
  // on unit rows, plus the row scaling and the input error.
  const double delta = input_rel_err * (1.0 + gamma(kd + 3)) + std::sqrt(kd) * kd * gamma(3 * kd) *
                                                                     std::ldexp(1.0, static_cast<int>(k) - 1) +
                       gamma(kd + 3);
  const double grow = std::pow(1.0 + delta, kd);
  const double scaled_bound = (grow - 1.0) + gamma(kd) * grow;
  const double value = det * norm_product;
  const double bound = 2.0 * (scaled_bound * norm_product * (1.0 + gamma(kd + 1)) + gamma(kd) * std::abs(value));
  return {value, bound + std::numeric_limits<double>::denorm_min()};
}

int exact_orientation(std::span<const double* const> points, std::size_t d) {
  require(points.size() == d + 1, "exact_orientation: need d+1 points");
  return exact_difference_det(points.subspan(1), points[0], d);
}

int orientation(std::span<const double* const> points, std::size_t d) {
  require(points.size() == d + 1 && d <= kMaxDim, "orientation: need d+1 points, d <= 8");
  std::array<double, kMaxDim * kMaxDim> m{};
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m[i * d + j] = points[i + 1][j] - points[0][j];
  const FilteredValue f = filtered_determinant(std::span<const double>(m.data(), d * d), d, kUnit);
  if (f.certain()) return f.sign();
  return exact_orientation(points, d);
}

std::size_t exact_affine_rank(std::span<const double* const> points, std::size_t d) {
  if (points.empty()) return 0;
  g_exact.fetch_add(1, std::memory_order_relaxed);
  const std::size_t rows = points.size() - 1;
  std::vector<mpq_class> m(rows * d);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < d; ++j) m[i * d + j] = mpq_class(points[i + 1][j]) - mpq_class(points[0][j]);
  return rational_rank(m, rows, d) + 1;
}

Hyperplane hyperplane_through(std::span<const double* const> vertices, std::size_t d) {
  require(vertices.size() == d && d >= 1 && d <= kMaxDim, "hyperplane_through: need d vertices");
  Hyperplane h;
  h.dim = d;
  for (std::size_t i = 0; i < d; ++i) h.vertices[i] = vertices[i];
  const std::size_t k = d - 1;
  std::array<double, kMaxDim * kMaxDim> edges{};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j) edges[i * d + j] = vertices[i + 1][j] - vertices[0][j];
  std::array<double, kMaxDim * kMaxDim> minor{};
  for (std::size_t col = 0; col < d; ++col) {
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < d; ++j)
        if (j != col) minor[i * k + jj++] = edges[i * d + j];
    }
    const FilteredValue f = filtered_determinant(std::span<const double>(minor.data(), k * k), k, kUnit);
    const double sign = ((k + col) % 2 == 0) ? 1.0 : -1.0;
    h.normal[col] = sign * f.value;
    h.normal_error[col] = f.error_bound;
  }
  return h;
}

FilteredValue side_filtered(const Hyperplane& h, const double* p) {
  const double* v0 = h.vertices[0];
  double s = 0.0;
  double err = 0.0;
  const double gd = gamma(static_cast<double>(h.dim) + 1);
  for (std::size_t j = 0; j < h.dim; ++j) {
    const double q = p[j] - v0[j];
    s += h.normal[j] * q;
    err += (h.normal_error[j] * (1.0 + 2 * kUnit) + std::abs(h.normal[j]) * (2 * kUnit + gd)) * std::abs(q);
  }
  return {s, 2.0 * err + std::numeric_limits<double>::denorm_min()};
}

int side(const Hyperplane& h, const double* p) {
  const FilteredValue f = side_filtered(h, p);
  if (f.certain()) return f.sign();
  std::array<const double*, kMaxDim> rows{};
  for (std::size_t i = 1; i < h.dim; ++i) rows[i - 1] = h.vertices[i];
  rows[h.dim - 1] = p;
  return exact_difference_det(std::span<const double* const>(rows.data(), h.dim), h.vertices[0], h.dim);
}

std::uint64_t exact_evaluations() { return g_exact.load(std::memory_order_relaxed); }

}  // namespace maghull::geom
