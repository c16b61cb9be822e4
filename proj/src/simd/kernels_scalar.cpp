#include <cmath>

#include "maghull/simd/kernels.hpp"

namespace maghull::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

void dot_tile_4x2_scalar(const double* const* a, const double* const* b, std::size_t n, double* out) {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) out[2 * r + c] = dot_scalar(a[r], b[c], n);
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void exp_neg_scaled_scalar(const double* x, double scale, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = std::exp(-(scale * x[k]));
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, dot_scalar, dot_tile_4x2_scalar, axpy_scalar,
                                 exp_neg_scaled_scalar};
  return table;
}

}  // namespace maghull::simd
