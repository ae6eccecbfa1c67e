#include <arm_neon.h>

#include "msgdt/kernels.hpp"

namespace msgdt::kernels {
namespace {

double dot_neon(const double* x, const double* y, std::size_t len) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < len; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t len) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  }
  for (; i < len; ++i) y[i] += alpha * x[i];
}

void hadamard_neon(const double* x, const double* y, double* out, std::size_t len) {
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  for (; i < len; ++i) out[i] = x[i] * y[i];
}

void gemm_acc_neon(const double* a, const double* b, double* c, std::size_t rows,
                   std::size_t inner, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    double* crow = c + i * cols;
    for (std::size_t p = 0; p < inner; ++p) {
      const double aip = a[i * inner + p];
      if (aip == 0.0) continue;
      const double* brow = b + p * cols;
      const float64x2_t av = vdupq_n_f64(aip);
      std::size_t j = 0;
      for (; j + 2 <= cols; j += 2) {
        vst1q_f64(crow + j, vfmaq_f64(vld1q_f64(crow + j), av, vld1q_f64(brow + j)));
      }
      for (; j < cols; ++j) crow[j] += aip * brow[j];
    }
  }
}

}  // namespace

const KernelTable& neon_table_unchecked() {
  static const KernelTable table{"neon", dot_neon, axpy_neon, hadamard_neon, gemm_acc_neon};
  return table;
}

}  // namespace msgdt::kernels
