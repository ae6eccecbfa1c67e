#pragma once

// Synthetic-data experiments: Gaussian A and X*, B = A ∗ X*, a missing-data
// mask per (p, trial), and a hybrid constant-then-1/√t step schedule with
// alpha = p² / step_divisor.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msgdt/missing.hpp"
#include "msgdt/solver.hpp"
#include "msgdt/tensor.hpp"

namespace msgdt {

struct Dims {
  std::size_t m = 0;
  std::size_t l = 0;
  std::size_t q = 0;
  std::size_t n = 0;

  /// Parses "m,l,q,n".
  static Dims parse(const std::string& text);
  std::string str() const;
};

struct SyntheticData {
  Tensor3 a;       // m x l x n
  Tensor3 x_star;  // l x q x n
  Tensor3 b;       // m x q x n, exactly a ∗ x_star
};

/// Fills A then X* (storage order) with Rng(seed).normal().
SyntheticData gen_synthetic(const Dims& dims, std::uint64_t seed);

enum class ModelKind { uniform, colblock, frontal };
ModelKind parse_model_kind(const std::string& name);
MissingModel make_model(ModelKind kind, double p, std::size_t block_size);

struct ExperimentSpec {
  Dims dims;
  std::vector<double> p_values;
  ModelKind model = ModelKind::uniform;
  std::size_t block_size = 4;
  std::size_t swap_iter = 5000;
  double step_divisor = 5000.0;
  std::optional<std::size_t> iterations;  // defaults to m
  Sampling sampling = Sampling::without_replacement;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t trace_every = 100;
  std::filesystem::path output_dir;
  /// Worker threads; 0 means MSGDT_THREADS or the hardware concurrency.
  std::size_t threads = 0;

  /// Throws ConfigError("no experiments requested") on empty p_values and
  /// ConfigError for other invalid fields.
  void validate() const;
};

struct RunSummary {
  double p = 0.0;
  std::size_t trial = 0;
  std::size_t iterations = 0;
  double initial_error = 0.0;
  std::optional<double> swap_error;
  double final_error = 0.0;
  std::string status = "ok";  // error message for runs that could not execute
};

/// Runs every (p, trial) pair, writes trace_p{p}_trial{t}.csv per run plus
/// summary.csv and manifest.txt into output_dir, and returns the summaries in
/// (p, trial) order.
std::vector<RunSummary> run_experiment(const ExperimentSpec& spec);

/// Median final error for each p over successful runs, in p_values order.
std::vector<double> median_final_errors(const std::vector<RunSummary>& runs,
                                        const std::vector<double>& p_values);

/// Shortest round-trip decimal form, used in file names and manifests.
std::string format_number(double v);

/// Worker count from MSGDT_THREADS, falling back to the hardware concurrency.
std::size_t default_thread_count();

/// Writes `key=value` lines, prefixed with the library version and active kernel set.
void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

struct VideoSpec {
  std::filesystem::path frames_dir;
  std::size_t rows = 0;  // rows of the Gaussian A
  double p = 0.3;
  std::optional<std::size_t> iterations;  // defaults to rows
  std::size_t swap_iter = 5000;
  double step_divisor = 1e6;
  double initial_value = 128.0;
  std::uint64_t seed = 0;
  std::size_t trace_every = 100;
  std::filesystem::path output_dir;
};

struct VideoResult {
  std::vector<double> frame_mae;
  RunTrace trace;
};

/// Treats the frame stack as X*, draws Gaussian A, masks it uniformly and
/// reconstructs X* starting from the constant tensor `initial_value`.
VideoResult run_video_reconstruction(const VideoSpec& spec);

}  // namespace msgdt
