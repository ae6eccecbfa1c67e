#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace msgdt {

/// Eigenvalues (ascending) of a dim x dim Hermitian matrix given row-major.
/// Cyclic Jacobi: each sweep phase-rotates the pivot entry to a real value and
/// annihilates it with a real plane rotation. Only the lower triangle's
/// conjugate symmetry is assumed, not checked.
std::vector<double> hermitian_eigenvalues(std::span<const std::complex<double>> matrix,
                                          std::size_t dim);

}  // namespace msgdt
