#include "msgdt/kernels.hpp"

namespace msgdt::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

void hadamard_scalar(const double* x, const double* y, double* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = x[i] * y[i];
}

void gemm_acc_scalar(const double* a, const double* b, double* c, std::size_t rows,
                     std::size_t inner, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    double* crow = c + i * cols;
    for (std::size_t p = 0; p < inner; ++p) {
      const double aip = a[i * inner + p];
      if (aip == 0.0) continue;
      const double* brow = b + p * cols;
      for (std::size_t j = 0; j < cols; ++j) crow[j] += aip * brow[j];
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", dot_scalar, axpy_scalar, hadamard_scalar,
                                 gemm_acc_scalar};
  return table;
}

}  // namespace msgdt::kernels
