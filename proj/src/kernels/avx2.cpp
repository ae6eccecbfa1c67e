// Compiled with -mavx2 -mfma. Only reached after a CPUID check in dispatch.cpp.
// Keep this file free of inline library templates: anything instantiated here
// carries AVX encodings and must not be merged into baseline code.

#include <immintrin.h>

#include "msgdt/kernels.hpp"

namespace msgdt::kernels {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* x, const double* y, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= len; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t len) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d yv = _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < len; ++i) y[i] += alpha * x[i];
}

void hadamard_avx2(const double* x, const double* y, double* out, std::size_t len) {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < len; ++i) out[i] = x[i] * y[i];
}

void gemm_acc_avx2(const double* a, const double* b, double* c, std::size_t rows,
                   std::size_t inner, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    double* crow = c + i * cols;
    for (std::size_t p = 0; p < inner; ++p) {
      const double aip = a[i * inner + p];
      if (aip == 0.0) continue;
      const double* brow = b + p * cols;
      const __m256d av = _mm256_set1_pd(aip);
      std::size_t j = 0;
      for (; j + 4 <= cols; j += 4) {
        __m256d cv = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j), _mm256_loadu_pd(crow + j));
        _mm256_storeu_pd(crow + j, cv);
      }
      for (; j < cols; ++j) crow[j] += aip * brow[j];
    }
  }
}

}  // namespace

const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{"avx2", dot_avx2, axpy_avx2, hadamard_avx2, gemm_acc_avx2};
  return table;
}

}  // namespace msgdt::kernels
