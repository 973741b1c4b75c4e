// Built only for aarch64 targets, where Advanced SIMD is architectural.
#include <arm_neon.h>

#include "polbias/kernels/kernels.hpp"

namespace polbias::kernels::neon {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
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

double signed_sum(const double* values, const std::uint64_t* sign_bits, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const std::uint64_t word = sign_bits[i >> 6] >> (i & 63);
    const uint64x2_t mask = {(word & 1u) << 63, ((word >> 1) & 1u) << 63};
    const float64x2_t v = vreinterpretq_f64_u64(veorq_u64(vreinterpretq_u64_f64(vld1q_f64(values + i)), mask));
    acc = vaddq_f64(acc, v);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const bool flip = (sign_bits[i >> 6] >> (i & 63)) & 1u;
    total += flip ? -values[i] : values[i];
  }
  return total;
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{Isa::kNeon, &dot, &nearest_row, &signed_sum};
  return t;
}

}  // namespace polbias::kernels::neon
