#pragma once

// Convergence constants for the missing-data SGD and the bounds built from them.
//
// With a_i = ‖A_i::‖, b_i = ‖B_i::‖ and R an upper bound on ‖X‖:
//   G   = 4n²R²/(p³m) Σ a_i⁴ + 4n^{3/2}R/(p²m) Σ a_i³ b_i + 2n/(p²m) Σ a_i² b_i²
//   G*  = 4n²R²/(p³m) Σ a_i⁴
//   L_g = n max_i a_i² / p²
//   μ   = σ_min² / m, σ_min the smallest singular value of bdiag(tube_dft(A))
// Fixed step α < 1/L_g:
//   E‖X^t − X*‖² ≤ r^t ‖X⁰ − X*‖² + αG*/(μ(1 − αL_g)),  r = 1 − 2αμ(1 − αL_g)
// Step α_t = C/√t over a domain of diameter K:
//   E[F(X^t) − F(X*)] ≤ (K²/C + CG)(2 + ln t)/√t

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msgdt/tensor.hpp"

namespace msgdt {

/// Frobenius norms of every row slice.
std::vector<double> row_norms(const Tensor3& t);

double compute_g(const Tensor3& a, const Tensor3& b, double radius, double p);
double compute_g_star(const Tensor3& a, double radius, double p);
double compute_lg(const Tensor3& a, double p);

struct StrongConvexity {
  double mu;
  double sigma_min;
};
/// Requires a tall tensor (rows >= cols).
StrongConvexity compute_mu(const Tensor3& a);

struct ConvergenceRatio {
  double value;
  /// True when 1 − 2αμ(1 − αL_g) <= 0; value is then reported as 0 and the
  /// fixed-step bound carries no information.
  bool clamped;
};
/// Throws ConfigError("step size too large") unless 0 < alpha < 1/lg, and
/// ConfigError unless mu > 0.
ConvergenceRatio convergence_ratio(double alpha, double mu, double lg);
double horizon_bound(double alpha, double mu, double lg, double g_star);

double decaying_step_bound(std::size_t t, double diameter, double step_const, double g);

struct BoundReport {
  double g = 0.0;
  double g_star = 0.0;
  double lg = 0.0;
  double mu = 0.0;
  double sigma_min = 0.0;
  std::optional<double> r;        // empty when alpha violates the fixed-step preconditions
  std::optional<double> horizon;  // likewise
  double diameter = 0.0;          // K = 2R for the ball domain
  double radius = 0.0;            // R
  double a_max = 0.0;
  double alpha = 0.0;
  double p = 0.0;
  std::string warning;

  /// One `key=value` per line.
  void write_text(std::ostream& out) const;
  /// Column order of csv_row().
  static std::string csv_header();
  std::string csv_row() const;
};

BoundReport make_bound_report(const Tensor3& a, const Tensor3& b, double p, double radius,
                              double alpha);

}  // namespace msgdt
