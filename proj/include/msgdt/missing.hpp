#pragma once

// Missing-data models for the observed tensor Ã = D ∘ A and the correction
// tensors C that make the stochastic update unbiased.
//
// A model decides which entries of a row slice go missing together:
//   uniform      every entry independently
//   colblock     each block of b consecutive columns (across all frontal slices)
//   frontal      each frontal slice of the row
// Each independent unit is observed with probability p.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "msgdt/random.hpp"
#include "msgdt/tensor.hpp"

namespace msgdt {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct UniformMissing {
  double p;
};
struct ColumnBlockMissing {
  double p;
  std::size_t block;
};
struct FrontalSliceMissing {
  double p;
};

class MissingModel {
 public:
  using Variant = std::variant<UniformMissing, ColumnBlockMissing, FrontalSliceMissing>;

  static MissingModel uniform(double p);
  static MissingModel column_block(double p, std::size_t block);
  static MissingModel frontal_slice(double p);

  /// Parses `uniform p=0.5`, `colblock p=0.5 b=4` or `frontal p=0.5`.
  static MissingModel parse(std::string_view line);
  std::string to_string() const;

  const Variant& variant() const { return model_; }
  double p() const;
  /// Kind name as used on the command line: uniform, colblock or frontal.
  std::string_view kind() const;

  /// Throws ConfigError unless the model can be applied to rows with `cols` columns.
  void check_columns(std::size_t cols) const;

  /// Number of independent Bernoulli units in one row slice.
  std::size_t units_per_row(std::size_t cols, std::size_t slices) const;

  friend bool operator==(const MissingModel& a, const MissingModel& b);

 private:
  explicit MissingModel(Variant v) : model_(v) {}
  Variant model_;
};

/// 0/1 tensor marking observed entries.
class BinaryMask {
 public:
  /// Throws ConfigError if any entry is not exactly 0 or 1.
  explicit BinaryMask(Tensor3 values);

  const Tensor3& tensor() const { return values_; }
  const Shape& shape() const { return values_.shape(); }
  double observed_fraction() const;

 private:
  Tensor3 values_;
};

/// Row mask (1 x l x n) built from per-unit observation flags, unit order as in
/// draw_row_mask.
Tensor3 row_mask_from_units(const MissingModel& model, std::size_t cols, std::size_t slices,
                            const std::function<bool(std::size_t)>& observed);

/// Draws one 1 x l x n row mask. Units are consumed in order: uniform visits
/// entries slice-major (k outer, j inner); colblock visits blocks left to
/// right; frontal visits slices 0..n-1.
Tensor3 draw_row_mask(const MissingModel& model, std::size_t cols, std::size_t slices, Rng& rng);

/// Draws a full m x l x n mask, one row after another.
BinaryMask draw_mask(const MissingModel& model, std::size_t rows, std::size_t cols,
                     std::size_t slices, Rng& rng);

Tensor3 apply_mask(const BinaryMask& mask, const Tensor3& a);

/// l x l x n correction tensor for the model (Hermitian, entries in {0, 1}).
///   uniform   ones on the diagonal of frontal slice 0
///   colblock  every frontal slice block-diagonal with b x b all-ones blocks
///   frontal   frontal slice 0 all ones, other slices zero
Tensor3 correction_tensor(const MissingModel& model, std::size_t cols, std::size_t slices);

/// Visits every configuration of one row mask together with its probability.
/// Cost grows as 2^units_per_row; intended for small verification instances.
void for_each_row_mask(const MissingModel& model, std::size_t cols, std::size_t slices,
                       const std::function<void(const Tensor3& mask, double prob)>& visit);

struct ExpectationReport {
  double max_rel_err_c1 = 0.0;
  double max_rel_err_c2 = 0.0;
  std::size_t trials = 0;
};

/// Monte Carlo check of E_D[C ∘ (Ã*∗Ã)] = p C ∘ (A*∗A) and
/// E_D[(1 - C) ∘ (Ã*∗Ã)] = p² (1 - C) ∘ (A*∗A) for one row slice.
/// Deviations are entrywise, divided by max(|target entry|, floor) where the
/// floor is 10% of the largest |target| entry.
ExpectationReport verify_expectation_identity(const Tensor3& a_row, const MissingModel& model,
                                              std::size_t trials, Rng& rng);

}  // namespace msgdt
