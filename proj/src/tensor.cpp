#include "msgdt/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "msgdt/kernels.hpp"

namespace msgdt {

namespace {

void require_nonempty(const Tensor3& t, const char* op) {
  if (t.empty()) throw DimensionError(std::string(op) + ": empty tensor");
}

void require_same_shape(const Tensor3& a, const Tensor3& b, const char* op) {
  require_nonempty(a, op);
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + a.shape().str() + " vs " +
                         b.shape().str());
  }
}

bool slice_is_zero(std::span<const double> s) {
  return std::all_of(s.begin(), s.end(), [](double v) { return v == 0.0; });
}

}  // namespace

std::string Shape::str() const {
  return std::to_string(rows) + "x" + std::to_string(cols) + "x" + std::to_string(slices);
}

Tensor3::Tensor3(std::size_t rows, std::size_t cols, std::size_t slices)
    : Tensor3(Shape{rows, cols, slices}) {}

Tensor3::Tensor3(Shape shape) : shape_(shape) {
  if (shape.rows == 0 || shape.cols == 0 || shape.slices == 0) {
    throw DimensionError("tensor dimensions must be positive, got " + shape.str());
  }
  values_.assign(shape.size(), 0.0);
}

Tensor3::Tensor3(Shape shape, std::vector<double> values) : Tensor3(shape) {
  if (values.size() != shape.size()) {
    throw DimensionError("tensor " + shape.str() + " needs " + std::to_string(shape.size()) +
                         " values, got " + std::to_string(values.size()));
  }
  values_ = std::move(values);
}

Tensor3 Tensor3::filled(Shape shape, double value) {
  Tensor3 t(shape);
  std::fill(t.values_.begin(), t.values_.end(), value);
  return t;
}

Tensor3 Tensor3::identity(std::size_t l, std::size_t n) {
  Tensor3 t(l, l, n);
  for (std::size_t i = 0; i < l; ++i) t(i, i, 0) = 1.0;
  return t;
}

Tensor3& Tensor3::operator+=(const Tensor3& other) {
  require_same_shape(*this, other, "add");
  kernels::active().axpy(1.0, other.values_.data(), values_.data(), values_.size());
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& other) {
  require_same_shape(*this, other, "sub");
  kernels::active().axpy(-1.0, other.values_.data(), values_.data(), values_.size());
  return *this;
}

Tensor3& Tensor3::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

ComplexTensor3::ComplexTensor3(Shape shape) : shape_(shape), values_(shape.size()) {}

Matrix unfold(const Tensor3& t) {
  require_nonempty(t, "unfold");
  Matrix m(t.rows() * t.slices(), t.cols());
  std::copy(t.values().begin(), t.values().end(), m.data.begin());
  return m;
}

Tensor3 fold(const Matrix& m, std::size_t slices) {
  if (slices == 0 || m.rows % slices != 0) {
    throw DimensionError("fold: " + std::to_string(m.rows) + " rows not divisible into " +
                         std::to_string(slices) + " slices");
  }
  return Tensor3(Shape{m.rows / slices, m.cols, slices}, m.data);
}

Matrix bcirc(const Tensor3& t) {
  require_nonempty(t, "bcirc");
  const std::size_t m = t.rows(), l = t.cols(), n = t.slices();
  Matrix out(m * n, l * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t k = (r + n - c) % n;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < l; ++j) out(r * m + i, c * l + j) = t(i, j, k);
      }
    }
  }
  return out;
}

Tensor3 tprod(const Tensor3& a, const Tensor3& x) {
  require_nonempty(a, "tprod");
  require_nonempty(x, "tprod");
  if (a.cols() != x.rows() || a.slices() != x.slices()) {
    throw DimensionError("tprod: incompatible shapes " + a.shape().str() + " * " +
                         x.shape().str());
  }
  const std::size_t m = a.rows(), l = a.cols(), q = x.cols(), n = a.slices();
  const auto& kern = kernels::active();
  Tensor3 out(m, q, n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto as = a.slice(s);
    if (slice_is_zero(as)) continue;
    // a_s contributes to out_k through x_j with j = k - s (mod n).
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = (s + j) % n;
      kern.gemm_acc(as.data(), x.slice(j).data(), out.slice(k).data(), m, l, q);
    }
  }
  return out;
}

Tensor3 transpose(const Tensor3& t) {
  require_nonempty(t, "transpose");
  const std::size_t m = t.rows(), l = t.cols(), n = t.slices();
  Tensor3 out(l, m, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = (n - k) % n;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < l; ++j) out(j, i, k) = t(i, j, src);
    }
  }
  return out;
}

bool is_hermitian(const Tensor3& t, double tol) {
  require_nonempty(t, "is_hermitian");
  if (t.rows() != t.cols()) {
    throw DimensionError("is_hermitian: slices are not square, shape " + t.shape().str());
  }
  return max_abs_diff(t, transpose(t)) <= tol;
}

double inner(const Tensor3& a, const Tensor3& b) {
  require_same_shape(a, b, "inner");
  return kernels::active().dot(a.values().data(), b.values().data(), a.size());
}

double frob_norm(const Tensor3& t) {
  require_nonempty(t, "frob_norm");
  const double* v = t.values().data();
  return std::sqrt(kernels::active().dot(v, v, t.size()));
}

Tensor3 hadamard(const Tensor3& a, const Tensor3& b) {
  require_same_shape(a, b, "hadamard");
  Tensor3 out(a.shape());
  kernels::active().hadamard(a.values().data(), b.values().data(), out.values().data(),
                             a.size());
  return out;
}

Tensor3 operator+(Tensor3 a, const Tensor3& b) {
  a += b;
  return a;
}

Tensor3 operator-(Tensor3 a, const Tensor3& b) {
  a -= b;
  return a;
}

Tensor3 operator*(double factor, Tensor3 t) {
  t *= factor;
  return t;
}

void axpy(double alpha, const Tensor3& x, Tensor3& y) {
  require_same_shape(x, y, "axpy");
  kernels::active().axpy(alpha, x.values().data(), y.values().data(), x.size());
}

double max_abs(const Tensor3& t) {
  double best = 0.0;
  for (double v : t.values()) best = std::max(best, std::abs(v));
  return best;
}

double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  require_same_shape(a, b, "max_abs_diff");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    best = std::max(best, std::abs(a.values()[i] - b.values()[i]));
  }
  return best;
}

Tensor3 row_slice(const Tensor3& t, std::size_t i) {
  require_nonempty(t, "row_slice");
  if (i >= t.rows()) {
    throw std::out_of_range("row_slice: row " + std::to_string(i) + " out of range for " +
                            t.shape().str());
  }
  Tensor3 out(1, t.cols(), t.slices());
  for (std::size_t k = 0; k < t.slices(); ++k) {
    const auto src = t.slice(k).subspan(i * t.cols(), t.cols());
    std::copy(src.begin(), src.end(), out.slice(k).begin());
  }
  return out;
}

namespace {

// Twiddles e^{sign * 2 pi i r / n} for r = 0..n-1, indexed by (j * k) mod n.
std::vector<std::complex<double>> twiddles(std::size_t n, double sign) {
  std::vector<std::complex<double>> w(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(r) /
                         static_cast<double>(n);
    w[r] = {std::cos(angle), std::sin(angle)};
  }
  return w;
}

ComplexTensor3 tube_transform(const ComplexTensor3& in, double sign, double factor) {
  const Shape& s = in.shape();
  const auto w = twiddles(s.slices, sign);
  ComplexTensor3 out(s);
  for (std::size_t i = 0; i < s.rows; ++i) {
    for (std::size_t j = 0; j < s.cols; ++j) {
      for (std::size_t k = 0; k < s.slices; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t t = 0; t < s.slices; ++t) acc += in(i, j, t) * w[(t * k) % s.slices];
        out(i, j, k) = factor * acc;
      }
    }
  }
  return out;
}

}  // namespace

ComplexTensor3 tube_dft(const Tensor3& t) {
  require_nonempty(t, "tube_dft");
  ComplexTensor3 in(t.shape());
  for (std::size_t k = 0; k < t.slices(); ++k) {
    for (std::size_t i = 0; i < t.rows(); ++i) {
      for (std::size_t j = 0; j < t.cols(); ++j) in(i, j, k) = t(i, j, k);
    }
  }
  return tube_transform(in, -1.0, 1.0);
}

ComplexTensor3 inverse_tube_dft(const ComplexTensor3& t) {
  return tube_transform(t, 1.0, 1.0 / static_cast<double>(t.shape().slices));
}

Tensor3 real_part(const ComplexTensor3& t) {
  Tensor3 out(t.shape());
  for (std::size_t idx = 0; idx < out.size(); ++idx) out.values()[idx] = t.values()[idx].real();
  return out;
}

}  // namespace msgdt
