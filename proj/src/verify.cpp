#include "msgdt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "msgdt/analysis.hpp"
#include "msgdt/random.hpp"
#include "msgdt/solver.hpp"

namespace msgdt {

namespace {

Tensor3 gaussian(std::size_t rows, std::size_t cols, std::size_t slices, Rng& rng) {
  Tensor3 t(rows, cols, slices);
  for (double& v : t.values()) v = rng.normal();
  return t;
}

CheckResult finish(std::string name, double value, double limit, std::string detail = {}) {
  return {std::move(name), value, limit, value <= limit, std::move(detail)};
}

}  // namespace

CheckResult verify_identities(const MissingModel& model, std::size_t l, std::size_t n,
                              std::size_t trials, std::uint64_t seed, double tol) {
  model.check_columns(l);
  Rng rng(seed);
  const Tensor3 row = gaussian(1, l, n, rng);
  const ExpectationReport rep = verify_expectation_identity(row, model, trials, rng);
  std::ostringstream detail;
  detail << "c1=" << rep.max_rel_err_c1 << " c2=" << rep.max_rel_err_c2
         << " trials=" << rep.trials;
  return finish("identities", std::max(rep.max_rel_err_c1, rep.max_rel_err_c2), tol,
                detail.str());
}

Tensor3 enumerated_mean_update(const Tensor3& a, const Tensor3& b, const Tensor3& x,
                               const MissingModel& model) {
  const std::size_t l = a.cols(), n = a.slices();
  const Tensor3 c = correction_tensor(model, l, n);
  Tensor3 mean(x.shape());
  const double inv_m = 1.0 / static_cast<double>(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const Tensor3 a_row = row_slice(a, i);
    const Tensor3 b_row = row_slice(b, i);
    for_each_row_mask(model, l, n, [&](const Tensor3& mask, double prob) {
      axpy(prob * inv_m, gradient_estimate(hadamard(mask, a_row), b_row, x, c, model.p()), mean);
    });
  }
  return mean;
}

CheckResult verify_unbiased(const MissingModel& model, const Dims& dims, std::uint64_t seed,
                            double tol) {
  model.check_columns(dims.l);
  const SyntheticData data = gen_synthetic(dims, seed);
  Rng rng(derive_seed(seed, 1));
  const Tensor3 x = gaussian(dims.l, dims.q, dims.n, rng);
  const Tensor3 mean = enumerated_mean_update(data.a, data.b, x, model);
  const Tensor3 grad = full_gradient(data.a, data.b, x);
  const double err = max_abs_diff(mean, grad) / std::max(max_abs(grad), 1e-300);
  return finish("unbiased", err, tol);
}

CheckResult verify_lipschitz(const MissingModel& model, const Dims& dims, std::size_t trials,
                             std::uint64_t seed) {
  model.check_columns(dims.l);
  Rng rng(seed);
  const Tensor3 a = gaussian(dims.m, dims.l, dims.n, rng);
  const Tensor3 c = correction_tensor(model, dims.l, dims.n);
  const Tensor3 b_zero(1, dims.q, dims.n);
  const double lg = compute_lg(a, model.p());
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t i = rng.index(dims.m);
    const Tensor3 row = hadamard(draw_row_mask(model, dims.l, dims.n, rng), row_slice(a, i));
    const Tensor3 x = gaussian(dims.l, dims.q, dims.n, rng);
    const Tensor3 y = gaussian(dims.l, dims.q, dims.n, rng);
    // B cancels in g(X) − g(Y).
    const Tensor3 diff =
        gradient_estimate(row, b_zero, x, c, model.p()) - gradient_estimate(row, b_zero, y, c, model.p());
    worst = std::max(worst, frob_norm(diff) / frob_norm(x - y));
  }
  std::ostringstream detail;
  detail << "Lg=" << lg << " trials=" << trials;
  return finish("lipschitz", worst, lg, detail.str());
}

std::vector<CheckResult> verify_second_moments(const MissingModel& model, const Dims& dims,
                                               std::size_t trials, std::uint64_t seed) {
  model.check_columns(dims.l);
  const SyntheticData data = gen_synthetic(dims, seed);
  const double radius = 2.0 * frob_norm(data.x_star);
  const double p = model.p();
  const double g = compute_g(data.a, data.b, radius, p);
  const double g_star = compute_g_star(data.a, radius, p);
  const Tensor3 c = correction_tensor(model, dims.l, dims.n);

  Rng rng(derive_seed(seed, 1));
  double sum_x = 0.0, sum_star = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t i = rng.index(dims.m);
    const Tensor3 row = hadamard(draw_row_mask(model, dims.l, dims.n, rng), row_slice(data.a, i));
    const Tensor3 b_row = row_slice(data.b, i);
    Tensor3 x = gaussian(dims.l, dims.q, dims.n, rng);
    x *= radius / frob_norm(x);
    const double gx = frob_norm(gradient_estimate(row, b_row, x, c, p));
    const double gs = frob_norm(gradient_estimate(row, b_row, data.x_star, c, p));
    sum_x += gx * gx;
    sum_star += gs * gs;
  }
  const double denom = static_cast<double>(trials);
  std::ostringstream detail;
  detail << "R=" << radius << " trials=" << trials;
  return {finish("second_moment_G", sum_x / denom, g, detail.str()),
          finish("second_moment_Gstar", sum_star / denom, g_star, detail.str())};
}

}  // namespace msgdt
