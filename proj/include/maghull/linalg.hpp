#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maghull/simd/kernels.hpp"

namespace maghull {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  /// Rows `rows`, columns `cols` of this matrix, in the given order.
  Matrix select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// y = A x for a dense matrix.
std::vector<double> multiply(const Matrix& a, std::span<const double> x);

/// Lower-triangular Cholesky factor L with A = L L^T.
///
/// The factorization is blocked and right-looking; the trailing update runs on
/// the 4x2 dot-product tile kernel of the active SIMD table. A pivot (the
/// diagonal entry before its square root) below `min_pivot` raises
/// ErrorCode::FactorizationFailure.
class CholeskyFactor {
 public:
  static constexpr double kDefaultMinPivot = 1e-14;

  static CholeskyFactor factor(Matrix a, double min_pivot = kDefaultMinPivot);
  static CholeskyFactor factor(Matrix a, double min_pivot, const simd::KernelTable& kernels);

  std::size_t size() const noexcept { return lower_.rows(); }
  const Matrix& lower() const noexcept { return lower_; }

  /// Solves L y = b in place.
  void forward_in_place(std::span<double> b) const;
  /// Solves L^T x = y in place.
  void backward_in_place(std::span<double> y) const;
  /// Solves A x = b in place.
  void solve_in_place(std::span<double> b) const;
  std::vector<double> solve(std::span<const double> b) const;

  double log_determinant() const;
  double determinant() const;

 private:
  explicit CholeskyFactor(Matrix lower, const simd::KernelTable& kernels)
      : lower_(std::move(lower)), kernels_(&kernels) {}

  Matrix lower_;
  const simd::KernelTable* kernels_;
};

}  // namespace maghull
