#include "polbias/kernels/kernels.hpp"

namespace polbias::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void nearest_row_scalar(const double* query, const double* rows, std::size_t count, std::size_t dim,
                        std::size_t* best_index, double* best_value) {
  std::size_t best = 0;
  double best_sim = dot_scalar(query, rows, dim);
  for (std::size_t r = 1; r < count; ++r) {
    const double s = dot_scalar(query, rows + r * dim, dim);
    if (s > best_sim) {
      best_sim = s;
      best = r;
    }
  }
  *best_index = best;
  *best_value = best_sim;
}

double signed_sum_scalar(const double* values, const std::uint64_t* sign_bits, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool flip = (sign_bits[i >> 6] >> (i & 63)) & 1u;
    acc += flip ? -values[i] : values[i];
  }
  return acc;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::kScalar, &dot_scalar, &nearest_row_scalar, &signed_sum_scalar};
  return table;
}

}  // namespace polbias::kernels
