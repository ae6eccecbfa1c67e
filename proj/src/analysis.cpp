#include "msgdt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "msgdt/hermitian_eig.hpp"
#include "msgdt/missing.hpp"

namespace msgdt {

namespace {

void check_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
}

void check_radius(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigError("radius must be positive and finite");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::vector<double> row_norms(const Tensor3& t) {
  std::vector<double> sq(t.rows(), 0.0);
  for (std::size_t k = 0; k < t.slices(); ++k) {
    for (std::size_t i = 0; i < t.rows(); ++i) {
      for (std::size_t j = 0; j < t.cols(); ++j) sq[i] += t(i, j, k) * t(i, j, k);
    }
  }
  for (double& v : sq) v = std::sqrt(v);
  return sq;
}

double compute_g(const Tensor3& a, const Tensor3& b, double radius, double p) {
  check_p(p);
  check_radius(radius);
  if (a.rows() != b.rows() || a.slices() != b.slices()) {
    throw DimensionError("compute_g: A " + a.shape().str() + " and B " + b.shape().str() +
                         " disagree");
  }
  const auto an = row_norms(a);
  const auto bn = row_norms(b);
  const double m = static_cast<double>(a.rows());
  const double n = static_cast<double>(a.slices());
  double s4 = 0.0, s3 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < an.size(); ++i) {
    const double a2 = an[i] * an[i];
    s4 += a2 * a2;
    s3 += a2 * an[i] * bn[i];
    s2 += a2 * bn[i] * bn[i];
  }
  return 4.0 * n * n * radius * radius / (p * p * p * m) * s4 +
         4.0 * std::pow(n, 1.5) * radius / (p * p * m) * s3 + 2.0 * n / (p * p * m) * s2;
}

double compute_g_star(const Tensor3& a, double radius, double p) {
  check_p(p);
  check_radius(radius);
  const auto an = row_norms(a);
  const double m = static_cast<double>(a.rows());
  const double n = static_cast<double>(a.slices());
  double s4 = 0.0;
  for (double v : an) s4 += v * v * v * v;
  return 4.0 * n * n * radius * radius / (p * p * p * m) * s4;
}

double compute_lg(const Tensor3& a, double p) {
  check_p(p);
  const auto an = row_norms(a);
  const double a_max = *std::max_element(an.begin(), an.end());
  return static_cast<double>(a.slices()) * a_max * a_max / (p * p);
}

StrongConvexity compute_mu(const Tensor3& a) {
  const std::size_t m = a.rows(), l = a.cols(), n = a.slices();
  if (m < l) {
    throw DimensionError("compute_mu needs a tall tensor (rows >= cols), got " + a.shape().str());
  }
  const ComplexTensor3 hat = tube_dft(a);
  double lambda_min = std::numeric_limits<double>::infinity();
  std::vector<std::complex<double>> gram(l * l);
  for (std::size_t k = 0; k < n; ++k) {
    const auto s = hat.slice(k);  // m x l, row-major
    for (std::size_t x = 0; x < l; ++x) {
      for (std::size_t y = 0; y < l; ++y) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += std::conj(s[i * l + x]) * s[i * l + y];
        gram[x * l + y] = acc;
      }
    }
    lambda_min = std::min(lambda_min, hermitian_eigenvalues(gram, l).front());
  }
  const double sigma_min = std::sqrt(std::max(lambda_min, 0.0));
  return {sigma_min * sigma_min / static_cast<double>(m), sigma_min};
}

ConvergenceRatio convergence_ratio(double alpha, double mu, double lg) {
  if (!(mu > 0.0)) throw ConfigError("strong convexity parameter must be positive");
  if (!(alpha > 0.0)) throw ConfigError("step size must be positive");
  if (!(alpha * lg < 1.0)) throw ConfigError("step size too large: alpha must be below 1/L_g");
  const double r = 1.0 - 2.0 * alpha * mu * (1.0 - alpha * lg);
  if (r <= 0.0) return {0.0, true};
  return {r, false};
}

double horizon_bound(double alpha, double mu, double lg, double g_star) {
  convergence_ratio(alpha, mu, lg);
  return alpha * g_star / (mu * (1.0 - alpha * lg));
}

double decaying_step_bound(std::size_t t, double diameter, double step_const, double g) {
  if (t == 0) throw ConfigError("decaying_step_bound needs t >= 1");
  if (!(step_const > 0.0)) throw ConfigError("step constant must be positive");
  const double tt = static_cast<double>(t);
  return (diameter * diameter / step_const + step_const * g) * (2.0 + std::log(tt)) /
         std::sqrt(tt);
}

void BoundReport::write_text(std::ostream& out) const {
  out << "G=" << fmt(g) << '\n'
      << "GStar=" << fmt(g_star) << '\n'
      << "Lg=" << fmt(lg) << '\n'
      << "mu=" << fmt(mu) << '\n'
      << "sigmaMin=" << fmt(sigma_min) << '\n'
      << "r=" << fmt(r) << '\n'
      << "horizon=" << fmt(horizon) << '\n'
      << "K=" << fmt(diameter) << '\n'
      << "R=" << fmt(radius) << '\n'
      << "aMax=" << fmt(a_max) << '\n'
      << "alpha=" << fmt(alpha) << '\n'
      << "p=" << fmt(p) << '\n';
  if (!warning.empty()) out << "warning=" << warning << '\n';
}

std::string BoundReport::csv_header() {
  return "G,GStar,Lg,mu,sigmaMin,r,horizon,K,R,aMax,alpha,p";
}

std::string BoundReport::csv_row() const {
  return fmt(g) + ',' + fmt(g_star) + ',' + fmt(lg) + ',' + fmt(mu) + ',' + fmt(sigma_min) +
         ',' + fmt(r) + ',' + fmt(horizon) + ',' + fmt(diameter) + ',' + fmt(radius) + ',' +
         fmt(a_max) + ',' + fmt(alpha) + ',' + fmt(p);
}

BoundReport make_bound_report(const Tensor3& a, const Tensor3& b, double p, double radius,
                              double alpha) {
  BoundReport rep;
  rep.p = p;
  rep.alpha = alpha;
  rep.radius = radius;
  rep.diameter = 2.0 * radius;
  rep.g = compute_g(a, b, radius, p);
  rep.g_star = compute_g_star(a, radius, p);
  rep.lg = compute_lg(a, p);
  const auto an = row_norms(a);
  rep.a_max = *std::max_element(an.begin(), an.end());
  const StrongConvexity sc = compute_mu(a);
  rep.mu = sc.mu;
  rep.sigma_min = sc.sigma_min;
  try {
    const ConvergenceRatio ratio = convergence_ratio(alpha, rep.mu, rep.lg);
    rep.r = ratio.value;
    rep.horizon = horizon_bound(alpha, rep.mu, rep.lg, rep.g_star);
    if (ratio.clamped) rep.warning = "1 - 2*alpha*mu*(1 - alpha*Lg) <= 0; ratio clamped to 0";
  } catch (const ConfigError& e) {
    rep.warning = e.what();
  }
  return rep;
}

}  // namespace msgdt
