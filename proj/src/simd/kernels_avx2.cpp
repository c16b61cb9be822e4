// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <cmath>

#include "maghull/simd/kernels.hpp"

namespace maghull::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  __m256d s3 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 16 <= n; k += 16) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 8), _mm256_loadu_pd(b + k + 8), s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 12), _mm256_loadu_pd(b + k + 12), s3);
  }
  for (; k + 4 <= n; k += 4) s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
  double s = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

void dot_tile_4x2_avx2(const double* const* a, const double* const* b, std::size_t n, double* out) {
  const double* a0 = a[0];
  const double* a1 = a[1];
  const double* a2 = a[2];
  const double* a3 = a[3];
  const double* b0 = b[0];
  const double* b1 = b[1];
  __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
  __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
  __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
  __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vb0 = _mm256_loadu_pd(b0 + k);
    const __m256d vb1 = _mm256_loadu_pd(b1 + k);
    __m256d va = _mm256_loadu_pd(a0 + k);
    c00 = _mm256_fmadd_pd(va, vb0, c00);
    c01 = _mm256_fmadd_pd(va, vb1, c01);
    va = _mm256_loadu_pd(a1 + k);
    c10 = _mm256_fmadd_pd(va, vb0, c10);
    c11 = _mm256_fmadd_pd(va, vb1, c11);
    va = _mm256_loadu_pd(a2 + k);
    c20 = _mm256_fmadd_pd(va, vb0, c20);
    c21 = _mm256_fmadd_pd(va, vb1, c21);
    va = _mm256_loadu_pd(a3 + k);
    c30 = _mm256_fmadd_pd(va, vb0, c30);
    c31 = _mm256_fmadd_pd(va, vb1, c31);
  }
  out[0] = hsum(c00);
  out[1] = hsum(c01);
  out[2] = hsum(c10);
  out[3] = hsum(c11);
  out[4] = hsum(c20);
  out[5] = hsum(c21);
  out[6] = hsum(c30);
  out[7] = hsum(c31);
  for (; k < n; ++k) {
    out[0] += a0[k] * b0[k];
    out[1] += a0[k] * b1[k];
    out[2] += a1[k] * b0[k];
    out[3] += a1[k] * b1[k];
    out[4] += a2[k] * b0[k];
    out[5] += a2[k] * b1[k];
    out[6] += a3[k] * b0[k];
    out[7] += a3[k] * b1[k];
  }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
    _mm256_storeu_pd(y + k + 4,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k + 4), _mm256_loadu_pd(y + k + 4)));
  }
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  for (; k < n; ++k) y[k] += alpha * x[k];
}

// exp(y) for y <= 0: y = k ln2 + r with |r| <= ln2/2, degree-13 Taylor
// polynomial in r (truncation below 1e-17 relative), then 2^k applied as two
// half-exponent factors so subnormal results round only once.
inline __m256d exp_nonpositive(__m256d y) {
  const __m256d underflow = _mm256_set1_pd(-745.2);
  const __m256d zero_mask = _mm256_cmp_pd(y, underflow, _CMP_LT_OQ);
  y = _mm256_max_pd(y, underflow);

  const __m256d kd =
      _mm256_round_pd(_mm256_mul_pd(y, _mm256_set1_pd(1.4426950408889634074)),
                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(kd, _mm256_set1_pd(6.93147180369123816490e-01), y);
  r = _mm256_fnmadd_pd(kd, _mm256_set1_pd(1.90821492927058770002e-10), r);

  static constexpr double kInvFact[14] = {1.0,
                                          1.0,
                                          1.0 / 2,
                                          1.0 / 6,
                                          1.0 / 24,
                                          1.0 / 120,
                                          1.0 / 720,
                                          1.0 / 5040,
                                          1.0 / 40320,
                                          1.0 / 362880,
                                          1.0 / 3628800,
                                          1.0 / 39916800,
                                          1.0 / 479001600,
                                          1.0 / 6227020800.0};
  __m256d p = _mm256_set1_pd(kInvFact[13]);
  for (int i = 12; i >= 0; --i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[i]));

  const __m256d k1d = _mm256_floor_pd(_mm256_mul_pd(kd, _mm256_set1_pd(0.5)));
  const __m256d k2d = _mm256_sub_pd(kd, k1d);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i e1 = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k1d)), bias), 52);
  const __m256i e2 = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k2d)), bias), 52);
  __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, _mm256_castsi256_pd(e1)), _mm256_castsi256_pd(e2));
  return _mm256_andnot_pd(zero_mask, result);
}

void exp_neg_scaled_avx2(const double* x, double scale, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(-scale);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, exp_nonpositive(_mm256_mul_pd(vs, _mm256_loadu_pd(x + k))));
  if (k < n) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = k; j < n; ++j) buf[j - k] = x[j];
    _mm256_store_pd(buf, exp_nonpositive(_mm256_mul_pd(vs, _mm256_load_pd(buf))));
    for (std::size_t j = k; j < n; ++j) out[j] = buf[j - k];
  }
}

}  // namespace

const KernelTable& avx2_kernels_table() {
  static const KernelTable table{Isa::Avx2, dot_avx2, dot_tile_4x2_avx2, axpy_avx2, exp_neg_scaled_avx2};
  return table;
}

}  // namespace maghull::simd
