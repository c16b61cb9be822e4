#pragma once

// Data-parallel inner loops of the dense linear-algebra core.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The active table is chosen once at startup from CPUID;
// setting MAGHULL_SIMD=scalar (or =avx2) in the environment overrides the
// choice. Variants agree to rounding, not bit-for-bit: vector lanes reorder
// the summations.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace maghull::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;

  /// sum_k a[k] * b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// out[2*r + c] = dot(a[r], b[c], n) for r in [0,4), c in [0,2).
  void (*dot_tile_4x2)(const double* const* a, const double* const* b, std::size_t n, double* out);

  /// y[k] += alpha * x[k]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  /// out[k] = exp(-scale * x[k]); requires scale * x[k] >= 0.
  void (*exp_neg_scaled)(const double* x, double scale, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the variant is not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();

/// The table selected for this process.
const KernelTable& active();

/// All tables usable on this machine, scalar first.
std::vector<const KernelTable*> available();

}  // namespace maghull::simd
