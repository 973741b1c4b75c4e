#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops of the stance analysis. Each instruction set
// provides the same table; the scalar table is the reference that the
// vector variants are tested against.
namespace polbias::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;

  // Inner product of two length-n vectors.
  double (*dot)(const double* a, const double* b, std::size_t n);

  // Scans `count` row-major rows of width `dim` and reports the row with the
  // largest inner product against `query`. Ties keep the lowest row index.
  void (*nearest_row)(const double* query, const double* rows, std::size_t count, std::size_t dim,
                      std::size_t* best_index, double* best_value);

  // Sum of values[i] with its sign flipped wherever bit i of `sign_bits`
  // is set (bit i lives in word i / 64, position i % 64).
  double (*signed_sum)(const double* values, const std::uint64_t* sign_bits, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Best table for this CPU. POLBIAS_ISA=scalar|avx2|neon forces a choice
// (falls back to scalar when unavailable). Resolved once per process.
const KernelTable& active_kernels();

}  // namespace polbias::kernels
