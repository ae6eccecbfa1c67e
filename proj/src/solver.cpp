#include "msgdt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "msgdt/random.hpp"

namespace msgdt {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + " must be positive and finite");
  }
}

void check_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
}

}  // namespace

StepSchedule StepSchedule::constant(double alpha) {
  require_positive(alpha, "step size");
  return StepSchedule(ConstantStep{alpha});
}

StepSchedule StepSchedule::inverse_sqrt(double c) {
  require_positive(c, "step constant");
  return StepSchedule(InverseSqrtStep{c});
}

StepSchedule StepSchedule::hybrid(double alpha, std::size_t swap_iter, double c) {
  require_positive(alpha, "step size");
  require_positive(c, "step constant");
  if (swap_iter == 0) throw ConfigError("swap iteration must be positive");
  return StepSchedule(HybridStep{alpha, swap_iter, c});
}

StepSchedule StepSchedule::hybrid_matched(double alpha, std::size_t swap_iter) {
  return hybrid(alpha, swap_iter, alpha * std::sqrt(static_cast<double>(swap_iter)));
}

double StepSchedule::at(std::size_t t) const {
  const double tt = static_cast<double>(t == 0 ? 1 : t);
  if (const auto* s = std::get_if<ConstantStep>(&schedule_)) return s->alpha;
  if (const auto* s = std::get_if<InverseSqrtStep>(&schedule_)) return s->c / std::sqrt(tt);
  const auto& h = std::get<HybridStep>(schedule_);
  return t < h.swap_iter ? h.alpha : h.c / std::sqrt(tt);
}

std::string StepSchedule::describe() const {
  char buf[160];
  if (const auto* s = std::get_if<ConstantStep>(&schedule_)) {
    std::snprintf(buf, sizeof buf, "constant alpha=%.17g", s->alpha);
  } else if (const auto* s = std::get_if<InverseSqrtStep>(&schedule_)) {
    std::snprintf(buf, sizeof buf, "inverse_sqrt c=%.17g", s->c);
  } else {
    const auto& h = std::get<HybridStep>(schedule_);
    std::snprintf(buf, sizeof buf, "hybrid alpha=%.17g swap=%zu c=%.17g", h.alpha, h.swap_iter,
                  h.c);
  }
  return buf;
}

void SolverConfig::validate(std::size_t rows) const {
  if (sampling == Sampling::without_replacement && iterations > rows) {
    throw ConfigError("without-replacement sampling needs iterations (" +
                      std::to_string(iterations) + ") <= rows (" + std::to_string(rows) + ")");
  }
  if (!(radius > 0.0)) throw ConfigError("projection radius must be positive");
  if (trace_every == 0) throw ConfigError("trace interval must be positive");
}

void RunTrace::write_csv(std::ostream& out) const {
  out << "iter,step_size,update_norm,iterate_error,objective\n";
  const auto field = [&out](const std::optional<double>& v) {
    out << ',';
    if (v) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", *v);
      out << buf;
    }
  };
  for (const auto& r : records) {
    out << r.iter;
    field(r.step_size);
    field(r.update_norm);
    field(r.iterate_error);
    field(r.objective);
    out << '\n';
  }
}

const TraceRecord* RunTrace::find(std::size_t iter) const {
  for (const auto& r : records) {
    if (r.iter == iter) return &r;
  }
  return nullptr;
}

ProblemInstance::ProblemInstance(Tensor3 data, bool holds_full, Tensor3 b, MissingModel model,
                                 Tensor3 x0, std::optional<BinaryMask> mask)
    : data_(std::move(data)),
      holds_full_(holds_full),
      mask_(std::move(mask)),
      b_(std::move(b)),
      model_(model),
      x0_(std::move(x0)) {
  const Shape& a = data_.shape();
  if (b_.rows() != a.rows || b_.slices() != a.slices || x0_.rows() != a.cols ||
      x0_.cols() != b_.cols() || x0_.slices() != a.slices) {
    throw DimensionError("inconsistent problem shapes: A " + a.str() + ", B " + b_.shape().str() +
                         ", X0 " + x0_.shape().str());
  }
  if (mask_ && mask_->shape() != a) {
    throw DimensionError("mask shape " + mask_->shape().str() + " does not match A " + a.str());
  }
  correction_ = correction_tensor(model_, a.cols, a.slices);
}

ProblemInstance ProblemInstance::observed(Tensor3 a_tilde, Tensor3 b, MissingModel model,
                                          Tensor3 x0, std::optional<BinaryMask> mask) {
  return ProblemInstance(std::move(a_tilde), false, std::move(b), model, std::move(x0),
                         std::move(mask));
}

ProblemInstance ProblemInstance::redraw(Tensor3 full_a, Tensor3 b, MissingModel model,
                                        Tensor3 x0) {
  return ProblemInstance(std::move(full_a), true, std::move(b), model, std::move(x0),
                         std::nullopt);
}

void ProblemInstance::set_correction(Tensor3 c) {
  if (c.shape() != correction_.shape()) {
    throw DimensionError("correction tensor must be " + correction_.shape().str() + ", got " +
                         c.shape().str());
  }
  for (double v : c.values()) {
    if (v != 0.0 && v != 1.0) throw ConfigError("correction tensor entries must be 0 or 1");
  }
  if (!is_hermitian(c)) throw ConfigError("correction tensor must be Hermitian");
  correction_ = std::move(c);
}

Tensor3 gradient_estimate(const Tensor3& a_row_tilde, const Tensor3& b_row, const Tensor3& x,
                          const Tensor3& c, double p) {
  check_p(p);
  const Tensor3 at = transpose(a_row_tilde);
  Tensor3 residual = tprod(a_row_tilde, x);
  axpy(-p, b_row, residual);
  Tensor3 g = tprod(at, residual);
  g *= 1.0 / (p * p);
  if (p < 1.0) {
    const Tensor3 h = hadamard(c, tprod(at, a_row_tilde));
    axpy(-(1.0 - p) / (p * p), tprod(h, x), g);
  }
  return g;
}

Tensor3 update_operator(const Tensor3& a_row_tilde, const Tensor3& c, double p) {
  check_p(p);
  const Tensor3 gram = tprod(transpose(a_row_tilde), a_row_tilde);
  Tensor3 m = (1.0 / (p * p)) * gram;
  axpy(-(1.0 - p) / (p * p), hadamard(c, gram), m);
  return m;
}

Tensor3 project_ball(Tensor3 x, double radius) {
  if (std::isinf(radius)) return x;
  const double norm = frob_norm(x);
  if (norm > radius) x *= radius / norm;
  return x;
}

double objective(const Tensor3& full_a, const Tensor3& b, const Tensor3& x) {
  const Tensor3 r = tprod(full_a, x) - b;
  const double norm = frob_norm(r);
  return norm * norm / (2.0 * static_cast<double>(full_a.rows()));
}

Tensor3 full_gradient(const Tensor3& full_a, const Tensor3& b, const Tensor3& x) {
  Tensor3 g = tprod(transpose(full_a), tprod(full_a, x) - b);
  g *= 1.0 / static_cast<double>(full_a.rows());
  return g;
}

RunResult run_msgdt(const ProblemInstance& problem, const SolverConfig& config,
                    TraceTargets targets) {
  config.validate(problem.rows());
  const double p = problem.model().p();
  const Tensor3& data = problem.data();
  const Shape& shape = data.shape();
  const bool redraw = config.sampling == Sampling::redraw_mask;
  if (redraw && !problem.holds_full_data()) {
    throw ConfigError("redraw sampling needs the full data tensor");
  }
  if (!redraw && problem.holds_full_data()) {
    throw ConfigError("without-replacement sampling needs the observed tensor");
  }

  Rng rng(config.seed);
  std::vector<std::size_t> order;
  if (!redraw) order = random_permutation(shape.rows, rng);

  RunResult result{problem.x0(), {}};
  Tensor3& x = result.x_final;

  const auto record = [&](std::size_t iter, std::optional<double> step,
                          std::optional<double> update) {
    TraceRecord rec{iter, step, update, std::nullopt, std::nullopt};
    if (targets.x_star != nullptr) rec.iterate_error = frob_norm(x - *targets.x_star);
    if (targets.full_a != nullptr) rec.objective = objective(*targets.full_a, problem.b(), x);
    result.trace.records.push_back(rec);
  };
  record(0, std::nullopt, std::nullopt);
  const auto& extra = config.extra_trace_iters;

  for (std::size_t t = 0; t < config.iterations; ++t) {
    Tensor3 a_row;
    std::size_t i = 0;
    if (redraw) {
      i = rng.index(shape.rows);
      a_row = hadamard(draw_row_mask(problem.model(), shape.cols, shape.slices, rng),
                       row_slice(data, i));
    } else {
      i = order[t];
      a_row = row_slice(data, i);
    }
    const Tensor3 g =
        gradient_estimate(a_row, row_slice(problem.b(), i), x, problem.correction(), p);
    const double step = config.schedule.at(t + 1);
    axpy(-step, g, x);
    x = project_ball(std::move(x), config.radius);

    const std::size_t done = t + 1;
    if (done % config.trace_every == 0 || done == config.iterations ||
        std::find(extra.begin(), extra.end(), done) != extra.end()) {
      record(done, step, frob_norm(g));
    }
  }
  return result;
}

}  // namespace msgdt
