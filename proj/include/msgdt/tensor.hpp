#pragma once

// Dense real third-order tensors and the t-product algebra.
//
// A tensor of shape m x l x n is stored frontal-slice-major: slice k is a
// contiguous row-major m x l block, so unfold() is a reinterpretation of the
// storage. All indices are zero-based.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace msgdt {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t slices = 0;

  std::size_t size() const { return rows * cols * slices; }
  std::size_t slice_size() const { return rows * cols; }
  std::string str() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Row-major dense matrix. Used for unfold/bcirc views and in tests.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

class Tensor3 {
 public:
  /// Empty placeholder (0 x 0 x 0). Every library operation rejects it.
  Tensor3() = default;

  /// Zero tensor. All dimensions must be positive.
  Tensor3(std::size_t rows, std::size_t cols, std::size_t slices);
  explicit Tensor3(Shape shape);
  Tensor3(Shape shape, std::vector<double> values);

  static Tensor3 filled(Shape shape, double value);
  static Tensor3 ones(Shape shape) { return filled(shape, 1.0); }
  /// l x l x n tensor with identity slice 0 and zero slices elsewhere.
  static Tensor3 identity(std::size_t l, std::size_t n);

  const Shape& shape() const { return shape_; }
  std::size_t rows() const { return shape_.rows; }
  std::size_t cols() const { return shape_.cols; }
  std::size_t slices() const { return shape_.slices; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return values_[k * shape_.slice_size() + i * shape_.cols + j];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[k * shape_.slice_size() + i * shape_.cols + j];
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::span<double> slice(std::size_t k) {
    return std::span<double>(values_).subspan(k * shape_.slice_size(), shape_.slice_size());
  }
  std::span<const double> slice(std::size_t k) const {
    return std::span<const double>(values_).subspan(k * shape_.slice_size(),
                                                    shape_.slice_size());
  }

  Tensor3& operator+=(const Tensor3& other);
  Tensor3& operator-=(const Tensor3& other);
  Tensor3& operator*=(double factor);

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

class ComplexTensor3 {
 public:
  ComplexTensor3() = default;
  explicit ComplexTensor3(Shape shape);

  const Shape& shape() const { return shape_; }

  std::complex<double>& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return values_[k * shape_.slice_size() + i * shape_.cols + j];
  }
  const std::complex<double>& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[k * shape_.slice_size() + i * shape_.cols + j];
  }

  std::span<const std::complex<double>> slice(std::size_t k) const {
    return std::span<const std::complex<double>>(values_).subspan(k * shape_.slice_size(),
                                                                  shape_.slice_size());
  }
  std::span<const std::complex<double>> values() const { return values_; }

 private:
  Shape shape_;
  std::vector<std::complex<double>> values_;
};

/// mn x l matrix stacking the frontal slices top to bottom.
Matrix unfold(const Tensor3& t);
/// Inverse of unfold; the matrix row count must be a multiple of slices.
Tensor3 fold(const Matrix& m, std::size_t slices);
/// mn x ln block-circulant matrix; block (r, c) is slice (r - c) mod n.
/// Only meant as a test oracle; the t-product never materializes it.
Matrix bcirc(const Tensor3& t);

/// t-product a * x, computed as a circular convolution over frontal slices:
/// slice k of the result is sum_j a_{(k - j) mod n} x_j. All-zero slices of a
/// and zero entries within a slice are skipped.
Tensor3 tprod(const Tensor3& a, const Tensor3& x);

/// Transposes every frontal slice and reverses the order of slices 1..n-1.
Tensor3 transpose(const Tensor3& t);
bool is_hermitian(const Tensor3& t, double tol = 0.0);

double inner(const Tensor3& a, const Tensor3& b);
double frob_norm(const Tensor3& t);

Tensor3 hadamard(const Tensor3& a, const Tensor3& b);
Tensor3 operator+(Tensor3 a, const Tensor3& b);
Tensor3 operator-(Tensor3 a, const Tensor3& b);
Tensor3 operator*(double factor, Tensor3 t);
/// y += alpha * x
void axpy(double alpha, const Tensor3& x, Tensor3& y);

double max_abs(const Tensor3& t);
double max_abs_diff(const Tensor3& a, const Tensor3& b);

/// Copy of row slice i (shape 1 x l x n).
Tensor3 row_slice(const Tensor3& t, std::size_t i);

/// Unnormalized DFT of every tube t(i, j, :).
ComplexTensor3 tube_dft(const Tensor3& t);
/// Inverse of tube_dft (including the 1/n factor).
ComplexTensor3 inverse_tube_dft(const ComplexTensor3& t);
Tensor3 real_part(const ComplexTensor3& t);

}  // namespace msgdt
