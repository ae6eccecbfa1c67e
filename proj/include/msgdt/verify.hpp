#pragma once

// Randomized and enumerated self-checks behind `msgdt verify`.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "msgdt/experiment.hpp"
#include "msgdt/missing.hpp"

namespace msgdt {

struct CheckResult {
  std::string name;
  double value = 0.0;  // observed quantity
  double limit = 0.0;  // passes when value <= limit
  bool pass = false;
  std::string detail;
};

/// Monte Carlo expectation identities on one Gaussian row slice of shape 1 x l x n.
CheckResult verify_identities(const MissingModel& model, std::size_t l, std::size_t n,
                              std::size_t trials, std::uint64_t seed, double tol);

/// Exact (row x mask) mean of the stochastic update against the full gradient
/// at a random X on a planted Gaussian instance.
CheckResult verify_unbiased(const MissingModel& model, const Dims& dims, std::uint64_t seed,
                            double tol);

/// Largest ‖g(X) − g(Y)‖ / ‖X − Y‖ over random (row, mask, X, Y) against L_g.
CheckResult verify_lipschitz(const MissingModel& model, const Dims& dims, std::size_t trials,
                             std::uint64_t seed);

/// Sample means of ‖g(X)‖² and ‖g(X*)‖² against G and G*, with R = 2‖X*‖ and
/// X drawn uniformly on the sphere of radius R.
std::vector<CheckResult> verify_second_moments(const MissingModel& model, const Dims& dims,
                                               std::size_t trials, std::uint64_t seed);

/// Exact (row x mask) average of gradient_estimate. Cost is rows * 2^units.
Tensor3 enumerated_mean_update(const Tensor3& a, const Tensor3& b, const Tensor3& x,
                               const MissingModel& model);

}  // namespace msgdt
