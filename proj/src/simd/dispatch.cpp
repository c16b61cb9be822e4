#include <cstdlib>
#include <string>

#include "maghull/simd/kernels.hpp"

namespace maghull::simd {

#if defined(MAGHULL_HAVE_AVX2_KERNELS)
const KernelTable& avx2_kernels_table();
#endif

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() {
#if defined(MAGHULL_HAVE_AVX2_KERNELS)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (supported) return &avx2_kernels_table();
#endif
  return nullptr;
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("MAGHULL_SIMD");
  const std::string choice = env ? env : "";
  if (choice == "scalar") return scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const KernelTable* t = avx2_kernels()) out.push_back(t);
  return out;
}

}  // namespace maghull::simd
