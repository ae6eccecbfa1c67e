#pragma once

// Stochastic gradient descent for A ∗ X = B when A is only partially observed.
//
// Each iteration picks one row slice i of the observed tensor Ã and steps along
//   g(X) = (1/p²) Ã_i*∗(Ã_i∗X − p B_i) − ((1−p)/p²) (C ∘ (Ã_i*∗Ã_i)) ∗ X,
// then projects onto a Frobenius ball.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "msgdt/missing.hpp"
#include "msgdt/tensor.hpp"

namespace msgdt {

struct ConstantStep {
  double alpha;
};
struct InverseSqrtStep {
  double c;
};
/// alpha until the swap iteration, then c / sqrt(t).
struct HybridStep {
  double alpha;
  std::size_t swap_iter;
  double c;
};

class StepSchedule {
 public:
  using Variant = std::variant<ConstantStep, InverseSqrtStep, HybridStep>;

  static StepSchedule constant(double alpha);
  static StepSchedule inverse_sqrt(double c);
  static StepSchedule hybrid(double alpha, std::size_t swap_iter, double c);
  /// Hybrid schedule with c = alpha * sqrt(swap_iter), so both phases agree at the swap.
  static StepSchedule hybrid_matched(double alpha, std::size_t swap_iter);

  /// Step size for the t-th update, t >= 1.
  double at(std::size_t t) const;

  const Variant& variant() const { return schedule_; }
  std::string describe() const;

 private:
  explicit StepSchedule(Variant v) : schedule_(v) {}
  Variant schedule_;
};

enum class Sampling {
  without_replacement,  // one random permutation of the rows, consumed in order
  redraw_mask,          // rows with replacement, fresh row mask every iteration
};

struct SolverConfig {
  StepSchedule schedule = StepSchedule::constant(1e-3);
  std::size_t iterations = 0;
  /// Radius of the Frobenius ball W; infinity means no projection.
  double radius = std::numeric_limits<double>::infinity();
  Sampling sampling = Sampling::without_replacement;
  std::uint64_t seed = 0;
  std::size_t trace_every = 1;
  /// Iterations recorded in addition to multiples of trace_every.
  std::vector<std::size_t> extra_trace_iters;

  /// Throws ConfigError if the configuration cannot run on `rows` row slices.
  void validate(std::size_t rows) const;
};

struct TraceRecord {
  std::size_t iter = 0;
  std::optional<double> step_size;
  std::optional<double> update_norm;
  std::optional<double> iterate_error;
  std::optional<double> objective;
};

struct RunTrace {
  std::vector<TraceRecord> records;

  /// `iter,step_size,update_norm,iterate_error,objective`, 17 significant
  /// digits, empty fields for missing metrics.
  void write_csv(std::ostream& out) const;
  const TraceRecord* find(std::size_t iter) const;
};

/// Data the solver iterates on. In without-replacement mode it holds the
/// observed tensor Ã; in redraw mode it holds the full A and masks each
/// sampled row on the fly.
class ProblemInstance {
 public:
  static ProblemInstance observed(Tensor3 a_tilde, Tensor3 b, MissingModel model, Tensor3 x0,
                                  std::optional<BinaryMask> mask = std::nullopt);
  static ProblemInstance redraw(Tensor3 full_a, Tensor3 b, MissingModel model, Tensor3 x0);

  /// Replaces the model's default correction tensor. Must be Hermitian with 0/1 entries.
  void set_correction(Tensor3 c);

  const Tensor3& data() const { return data_; }
  bool holds_full_data() const { return holds_full_; }
  const std::optional<BinaryMask>& mask() const { return mask_; }
  const Tensor3& b() const { return b_; }
  const MissingModel& model() const { return model_; }
  const Tensor3& correction() const { return correction_; }
  const Tensor3& x0() const { return x0_; }
  std::size_t rows() const { return data_.rows(); }

 private:
  ProblemInstance(Tensor3 data, bool holds_full, Tensor3 b, MissingModel model, Tensor3 x0,
                  std::optional<BinaryMask> mask);

  Tensor3 data_;
  bool holds_full_;
  std::optional<BinaryMask> mask_;
  Tensor3 b_;
  MissingModel model_;
  Tensor3 correction_;
  Tensor3 x0_;
};

/// The stochastic update g(X) for one observed row slice.
Tensor3 gradient_estimate(const Tensor3& a_row_tilde, const Tensor3& b_row, const Tensor3& x,
                          const Tensor3& c, double p);

/// M = (1/p²) Ã_i*∗Ã_i − ((1−p)/p²) C ∘ (Ã_i*∗Ã_i), the linear part of g:
/// g(X) = M ∗ X − (1/p) Ã_i* ∗ B_i.
Tensor3 update_operator(const Tensor3& a_row_tilde, const Tensor3& c, double p);

/// Scales x back onto the ball of the given radius if it lies outside.
Tensor3 project_ball(Tensor3 x, double radius);

/// F(X) = ‖A∗X − B‖² / (2m)
double objective(const Tensor3& full_a, const Tensor3& b, const Tensor3& x);
/// ∇F(X) = A*∗(A∗X − B) / m
Tensor3 full_gradient(const Tensor3& full_a, const Tensor3& b, const Tensor3& x);

struct TraceTargets {
  const Tensor3* x_star = nullptr;  // enables iterate_error
  const Tensor3* full_a = nullptr;  // enables objective
};

struct RunResult {
  Tensor3 x_final;
  RunTrace trace;
};

RunResult run_msgdt(const ProblemInstance& problem, const SolverConfig& config,
                    TraceTargets targets = {});

}  // namespace msgdt
