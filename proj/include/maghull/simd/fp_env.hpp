#pragma once

#if defined(__SSE2__) || defined(__x86_64__)
#include <xmmintrin.h>
#define MAGHULL_HAVE_MXCSR 1
#endif

namespace maghull::simd {

/// Flushes subnormal results and operands to zero for the current thread
/// while in scope. Similarity entries at large t sit near the bottom of the
/// double range, and subnormal arithmetic slows the factorization by an order
/// of magnitude; values below DBL_MIN are far beneath any tolerance here.
class FlushSubnormals {
 public:
#ifdef MAGHULL_HAVE_MXCSR
  FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushSubnormals() { _mm_setcsr(saved_); }

 private:
  unsigned saved_;
#else
  FlushSubnormals() = default;
#endif

 public:
  FlushSubnormals(const FlushSubnormals&) = delete;
  FlushSubnormals& operator=(const FlushSubnormals&) = delete;
};

}  // namespace maghull::simd
