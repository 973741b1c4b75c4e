#include <cstdlib>
#include <string>

#include "polbias/kernels/kernels.hpp"

namespace polbias::kernels {

#if defined(POLBIAS_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif
#if defined(POLBIAS_HAVE_NEON)
namespace neon {
const KernelTable& table();
}
#endif

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "scalar";
}

const KernelTable* avx2_kernels() {
#if defined(POLBIAS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2::table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(POLBIAS_HAVE_NEON)
  return &neon::table();
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* forced = std::getenv("POLBIAS_ISA");
    const std::string want = forced ? forced : "";
    if (want == "scalar") return scalar_kernels();
    if (want == "avx2") return avx2_kernels() ? *avx2_kernels() : scalar_kernels();
    if (want == "neon") return neon_kernels() ? *neon_kernels() : scalar_kernels();
    if (const auto* t = avx2_kernels()) return *t;
    if (const auto* t = neon_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace polbias::kernels
