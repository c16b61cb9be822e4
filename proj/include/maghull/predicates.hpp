#pragma once

// Orientation predicates in R^d (d <= kMaxDim) with a floating-point filter.
//
// Each determinant is evaluated by partial-pivoting elimination on unit-scaled
// rows together with an a-priori bound on its rounding error. When the value
// does not clear the bound, the sign is recomputed exactly in rational
// arithmetic (GMP), so every sign these functions return is exact.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace maghull::geom {

inline constexpr std::size_t kMaxDim = 8;

struct FilteredValue {
  double value = 0.0;
  double error_bound = 0.0;

  bool certain() const noexcept { return value > error_bound || -value > error_bound; }
  int sign() const noexcept { return value > 0.0 ? 1 : (value < 0.0 ? -1 : 0); }
};

/// Determinant of the k x k row-major matrix `m`. `input_rel_err` is the
/// componentwise relative error already present in the entries.
FilteredValue filtered_determinant(std::span<const double> m, std::size_t k, double input_rel_err = 0.0);

/// Exact sign of det[p1 - p0, ..., pd - p0] for d+1 points of R^d.
int exact_orientation(std::span<const double* const> points, std::size_t d);

/// Filtered, then exact when ambiguous.
int orientation(std::span<const double* const> points, std::size_t d);

/// Exact affine rank of the given points (0 for an empty set).
std::size_t exact_affine_rank(std::span<const double* const> points, std::size_t d);

/// Hyperplane through d points of R^d, as the cofactor vector n of the last
/// row so that side(p) = n . (p - v0) = det[v1 - v0, ..., v_{d-1} - v0, p - v0].
struct Hyperplane {
  std::array<double, kMaxDim> normal{};
  std::array<double, kMaxDim> normal_error{};
  std::array<const double*, kMaxDim> vertices{};
  std::size_t dim = 0;
};

Hyperplane hyperplane_through(std::span<const double* const> vertices, std::size_t d);

/// Filtered side value of p.
FilteredValue side_filtered(const Hyperplane& h, const double* p);

/// Exact sign of side(p).
int side(const Hyperplane& h, const double* p);

/// Number of exact (GMP) evaluations performed so far, process-wide.
std::uint64_t exact_evaluations();

}  // namespace maghull::geom
