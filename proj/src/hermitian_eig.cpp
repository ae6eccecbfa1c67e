#include "msgdt/hermitian_eig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msgdt {

std::vector<double> hermitian_eigenvalues(std::span<const std::complex<double>> matrix,
                                          std::size_t dim) {
  if (matrix.size() != dim * dim) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix size does not match dim");
  }
  std::vector<std::complex<double>> a(matrix.begin(), matrix.end());
  const auto at = [&a, dim](std::size_t i, std::size_t j) -> std::complex<double>& {
    return a[i * dim + j];
  };
  for (std::size_t i = 0; i < dim; ++i) at(i, i) = at(i, i).real();

  double scale = 0.0;
  for (const auto& v : a) scale = std::max(scale, std::abs(v));

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i + 1; j < dim; ++j) off += std::norm(at(i, j));
    }
    if (off == 0.0 || std::sqrt(off) <= 1e-15 * scale) break;

    for (std::size_t p = 0; p + 1 < dim; ++p) {
      for (std::size_t q = p + 1; q < dim; ++q) {
        const double mag = std::abs(at(p, q));
        if (mag == 0.0) continue;
        // Phase step: scale row/column q by e^{-i phi} so a_pq becomes |a_pq|.
        const std::complex<double> phase = at(p, q) / mag;
        for (std::size_t k = 0; k < dim; ++k) {
          if (k == q) continue;
          at(k, q) *= std::conj(phase);
          at(q, k) = std::conj(at(k, q));
        }
        at(p, q) = mag;
        at(q, p) = mag;

        const double app = at(p, p).real();
        const double aqq = at(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < dim; ++k) {
          if (k == p || k == q) continue;
          const std::complex<double> akp = at(k, p);
          const std::complex<double> akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
          at(p, k) = std::conj(at(k, p));
          at(q, k) = std::conj(at(k, q));
        }
        at(p, p) = app - t * mag;
        at(q, q) = aqq + t * mag;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
      }
    }
  }

  std::vector<double> eig(dim);
  for (std::size_t i = 0; i < dim; ++i) eig[i] = at(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace msgdt
