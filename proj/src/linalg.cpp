#include "maghull/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maghull/error.hpp"
#include "maghull/simd/fp_env.hpp"

namespace maghull {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(rows[i], cols[j]);
  return out;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
  require(a.cols() == x.size(), "multiply: dimension mismatch");
  simd::FlushSubnormals ftz;
  const auto& k = simd::active();
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = k.dot(a.row(i).data(), x.data(), x.size());
  return y;
}

namespace {

constexpr std::size_t kBlock = 64;

[[noreturn]] void pivot_failure(std::size_t index, double pivot) {
  std::ostringstream os;
  os.precision(17);
  os << "Cholesky pivot " << pivot << " at index " << index << " is below threshold";
  fail(ErrorCode::FactorizationFailure, os.str());
}

void factor_in_place(Matrix& a, double min_pivot, const simd::KernelTable& kt) {
  const std::size_t n = a.rows();
  for (std::size_t k0 = 0; k0 < n; k0 += kBlock) {
    const std::size_t k1 = std::min(n, k0 + kBlock);

    // Diagonal block. Contributions from columns < k0 were already subtracted.
    for (std::size_t i = k0; i < k1; ++i) {
      double* ri = a.row(i).data();
      for (std::size_t j = k0; j < i; ++j) {
        const double* rj = a.row(j).data();
        ri[j] = (ri[j] - kt.dot(ri + k0, rj + k0, j - k0)) / rj[j];
      }
      const double pivot = ri[i] - kt.dot(ri + k0, ri + k0, i - k0);
      if (!(pivot >= min_pivot)) pivot_failure(i, pivot);
      ri[i] = std::sqrt(pivot);
    }

    // Panel below the diagonal block.
    for (std::size_t i = k1; i < n; ++i) {
      double* ri = a.row(i).data();
      for (std::size_t j = k0; j < k1; ++j) {
        const double* rj = a.row(j).data();
        ri[j] = (ri[j] - kt.dot(ri + k0, rj + k0, j - k0)) / rj[j];
      }
    }

    // Trailing lower triangle: A[i][j] -= <L[i][k0:k1], L[j][k0:k1]> for k1 <= j <= i.
    const std::size_t kb = k1 - k0;
    std::size_t i0 = k1;
    for (; i0 + 4 <= n; i0 += 4) {
      const double* arows[4] = {a.row(i0).data() + k0, a.row(i0 + 1).data() + k0, a.row(i0 + 2).data() + k0,
                                a.row(i0 + 3).data() + k0};
      for (std::size_t j0 = k1; j0 <= i0 + 3; j0 += 2) {
        const std::size_t j1 = std::min(j0 + 1, n - 1);
        const double* brows[2] = {a.row(j0).data() + k0, a.row(j1).data() + k0};
        double out[8];
        kt.dot_tile_4x2(arows, brows, kb, out);
        for (std::size_t r = 0; r < 4; ++r) {
          const std::size_t i = i0 + r;
          if (j0 <= i) a(i, j0) -= out[2 * r];
          if (j0 + 1 <= i) a(i, j0 + 1) -= out[2 * r + 1];
        }
      }
    }
    for (; i0 < n; ++i0) {
      double* ri = a.row(i0).data();
      for (std::size_t j = k1; j <= i0; ++j) ri[j] -= kt.dot(ri + k0, a.row(j).data() + k0, kb);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
}

}  // namespace

CholeskyFactor CholeskyFactor::factor(Matrix a, double min_pivot) {
  return factor(std::move(a), min_pivot, simd::active());
}

CholeskyFactor CholeskyFactor::factor(Matrix a, double min_pivot, const simd::KernelTable& kernels) {
  require(a.rows() == a.cols(), "Cholesky: matrix must be square");
  simd::FlushSubnormals ftz;
  factor_in_place(a, min_pivot, kernels);
  return CholeskyFactor(std::move(a), kernels);
}

void CholeskyFactor::forward_in_place(std::span<double> b) const {
  require(b.size() == size(), "Cholesky solve: dimension mismatch");
  simd::FlushSubnormals ftz;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double* li = lower_.row(i).data();
    b[i] = (b[i] - kernels_->dot(li, b.data(), i)) / li[i];
  }
}

void CholeskyFactor::backward_in_place(std::span<double> y) const {
  require(y.size() == size(), "Cholesky solve: dimension mismatch");
  simd::FlushSubnormals ftz;
  for (std::size_t i = y.size(); i-- > 0;) {
    const double* li = lower_.row(i).data();
    y[i] /= li[i];
    kernels_->axpy(-y[i], li, y.data(), i);
  }
}

void CholeskyFactor::solve_in_place(std::span<double> b) const {
  forward_in_place(b);
  backward_in_place(b);
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

double CholeskyFactor::log_determinant() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += std::log(lower_(i, i));
  return 2.0 * s;
}

double CholeskyFactor::determinant() const {
  double p = 1.0;
  for (std::size_t i = 0; i < size(); ++i) p *= lower_(i, i) * lower_(i, i);
  return p;
}

}  // namespace maghull
