#pragma once

// Dense double-precision inner loops used by the tensor algebra.
//
// Every kernel has a portable scalar reference implementation. Vectorized
// variants (AVX2+FMA on x86-64, NEON on AArch64) are compiled in separate
// translation units and selected once at runtime. The environment variable
// MSGDT_SIMD=scalar|avx2|neon overrides the automatic choice.

#include <cstddef>
#include <string_view>

namespace msgdt::kernels {

struct KernelTable {
  std::string_view name;

  /// sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t len);

  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t len);

  /// out[i] = x[i] * y[i]; out may alias x or y.
  void (*hadamard)(const double* x, const double* y, double* out, std::size_t len);

  /// c += a * b for row-major a (rows x inner), b (inner x cols), c (rows x cols).
  /// Zero entries of a are skipped, so structurally sparse left operands are cheap.
  void (*gemm_acc)(const double* a, const double* b, double* c, std::size_t rows,
                   std::size_t inner, std::size_t cols);
};

const KernelTable& scalar_table();

/// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

/// The table used by the library; resolved on first call.
const KernelTable& active();

}  // namespace msgdt::kernels
