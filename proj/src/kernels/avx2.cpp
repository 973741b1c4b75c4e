// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>


#include "polbias/kernels/kernels.hpp"

namespace polbias::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void nearest_row(const double* query, const double* rows, std::size_t count, std::size_t dim,
                 std::size_t* best_index, double* best_value) {
  std::size_t best = 0;
  double best_sim = dot(query, rows, dim);
  for (std::size_t r = 1; r < count; ++r) {
    const double s = dot(query, rows + r * dim, dim);
    if (s > best_sim) {
      best_sim = s;
      best = r;
    }
  }
  *best_index = best;
  *best_value = best_sim;
}

// Lane masks with the sign bit set for each 4-bit pattern.
struct SignMasks {
  alignas(32) double lanes[16][4];
};

const SignMasks& sign_masks() {
  static const SignMasks masks = [] {
    SignMasks m{};
    for (int p = 0; p < 16; ++p) {
      for (int l = 0; l < 4; ++l) m.lanes[p][l] = (p >> l) & 1 ? -0.0 : 0.0;
    }
    return m;
  }();
  return masks;
}

inline __m256d mask_for(const SignMasks& m, std::uint64_t pattern) { return _mm256_load_pd(m.lanes[pattern & 0xF]); }

double signed_sum(const double* values, const std::uint64_t* sign_bits, std::size_t n) {
  const auto& masks = sign_masks();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const std::uint64_t word = sign_bits[i >> 6] >> (i & 63);
    const __m256d v0 = _mm256_xor_pd(_mm256_loadu_pd(values + i), mask_for(masks, word));
    const __m256d v1 = _mm256_xor_pd(_mm256_loadu_pd(values + i + 4), mask_for(masks, word >> 4));
    acc0 = _mm256_add_pd(acc0, v0);
    acc1 = _mm256_add_pd(acc1, v1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const bool flip = (sign_bits[i >> 6] >> (i & 63)) & 1u;
    acc += flip ? -values[i] : values[i];
  }
  return acc;
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{Isa::kAvx2, &dot, &nearest_row, &signed_sum};
  return t;
}

}  // namespace polbias::kernels::avx2
