// msgdt: data generation, masking, solving, bounds and self-checks for
// tensor systems A ∗ X = B with missing entries in A.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "msgdt/analysis.hpp"
#include "msgdt/experiment.hpp"
#include "msgdt/frames.hpp"
#include "msgdt/missing.hpp"
#include "msgdt/random.hpp"
#include "msgdt/solver.hpp"
#include "msgdt/tensor_io.hpp"
#include "msgdt/verify.hpp"

namespace fs = std::filesystem;
using namespace msgdt;

namespace {

double parse_radius(const std::string& text) {
  if (text == "unbounded") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double r = 0.0;
  try {
    r = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(r > 0.0)) {
    throw ConfigError("--radius must be a positive number or 'unbounded', got '" + text + "'");
  }
  return r;
}

Sampling parse_sampling(const std::string& text) {
  if (text == "once") return Sampling::without_replacement;
  if (text == "redraw") return Sampling::redraw_mask;
  throw ConfigError("--sampling must be once or redraw, got '" + text + "'");
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc);
  out << body;
}

// Options shared by commands that build a missing-data model.
struct ModelOpts {
  std::string kind = "uniform";
  double p = 0.5;
  std::size_t block = 4;

  void add(CLI::App* cmd) {
    cmd->add_option("--model", kind, "uniform | colblock | frontal")->capture_default_str();
    cmd->add_option("--p", p, "observation probability in (0, 1]")->capture_default_str();
    cmd->add_option("--block-size", block, "column block size for colblock")->capture_default_str();
  }
  MissingModel make() const { return make_model(parse_model_kind(kind), p, block); }
};

struct GenOpts {
  std::string dims = "10000,20,10,10";
  std::uint64_t seed = 0;
  fs::path out;
};

int run_gen(const GenOpts& o) {
  const Dims dims = Dims::parse(o.dims);
  const SyntheticData data = gen_synthetic(dims, o.seed);
  fs::create_directories(o.out);
  save_t3f(o.out / "A.t3f", data.a);
  save_t3f(o.out / "Xstar.t3f", data.x_star);
  save_t3f(o.out / "B.t3f", data.b);
  write_manifest(o.out / "manifest.txt",
                 {{"command", "gen"}, {"dims", dims.str()}, {"seed", std::to_string(o.seed)}});
  std::cout << "wrote A " << data.a.shape().str() << ", Xstar " << data.x_star.shape().str()
            << ", B " << data.b.shape().str() << " to " << o.out.string() << '\n';
  return 0;
}

struct MaskOpts {
  fs::path in;
  ModelOpts model;
  std::uint64_t seed = 0;
  fs::path out;
};

int run_mask(const MaskOpts& o) {
  const Tensor3 a = load_t3f(o.in / "A.t3f");
  const MissingModel model = o.model.make();
  Rng rng(o.seed);
  const BinaryMask mask = draw_mask(model, a.rows(), a.cols(), a.slices(), rng);
  fs::create_directories(o.out);
  save_t3f(o.out / "mask.t3f", mask.tensor());
  save_t3f(o.out / "A_tilde.t3f", apply_mask(mask, a));
  save_t3f(o.out / "C.t3f", correction_tensor(model, a.cols(), a.slices()));
  write_text(o.out / "model.txt", model.to_string() + "\n");
  write_manifest(o.out / "manifest.txt", {{"command", "mask"},
                                          {"in", o.in.string()},
                                          {"model", model.to_string()},
                                          {"seed", std::to_string(o.seed)}});
  std::cout << model.to_string() << ": observed fraction " << mask.observed_fraction() << '\n';
  return 0;
}

struct SolveOpts {
  fs::path in;
  std::optional<fs::path> mask;
  ModelOpts model;
  std::optional<std::size_t> iters;
  std::string schedule = "hybrid";
  std::optional<double> alpha;
  std::optional<double> step_const;
  std::size_t swap_iter = 5000;
  double step_divisor = 5000.0;
  std::string radius = "unbounded";
  std::string sampling = "once";
  std::uint64_t seed = 0;
  std::size_t trace_every = 100;
  bool objective = false;
  fs::path out;
};

StepSchedule make_schedule(const SolveOpts& o, double alpha) {
  if (o.schedule == "constant") return StepSchedule::constant(alpha);
  const double c = o.step_const.value_or(alpha * std::sqrt(static_cast<double>(o.swap_iter)));
  if (o.schedule == "invsqrt") return StepSchedule::inverse_sqrt(c);
  if (o.schedule == "hybrid") return StepSchedule::hybrid(alpha, o.swap_iter, c);
  throw ConfigError("--schedule must be hybrid, constant or invsqrt, got '" + o.schedule + "'");
}

int run_solve(const SolveOpts& o) {
  const Tensor3 a = load_t3f(o.in / "A.t3f");
  const Tensor3 b = load_t3f(o.in / "B.t3f");
  std::optional<Tensor3> x_star;
  if (fs::exists(o.in / "Xstar.t3f")) x_star = load_t3f(o.in / "Xstar.t3f");

  const MissingModel model = o.model.make();
  const double p = model.p();
  const double alpha = o.alpha.value_or(p * p / o.step_divisor);

  SolverConfig config;
  config.schedule = make_schedule(o, alpha);
  config.iterations = o.iters.value_or(a.rows());
  config.radius = parse_radius(o.radius);
  config.sampling = parse_sampling(o.sampling);
  config.seed = derive_seed(o.seed, 2);
  config.trace_every = o.trace_every;
  if (o.schedule == "hybrid") config.extra_trace_iters = {o.swap_iter};

  const Tensor3 x0(a.cols(), b.cols(), a.slices());
  std::string mask_source = "none";
  const auto problem = [&] {
    if (config.sampling == Sampling::redraw_mask) return ProblemInstance::redraw(a, b, model, x0);
    std::optional<BinaryMask> mask;
    if (o.mask) {
      mask.emplace(load_t3f(*o.mask));
      mask_source = o.mask->string();
    } else {
      Rng rng(derive_seed(o.seed, 1));
      mask = draw_mask(model, a.rows(), a.cols(), a.slices(), rng);
      mask_source = "drawn";
    }
    if (mask->shape() != a.shape()) {
      throw DimensionError("mask " + mask->shape().str() + " does not match A " + a.shape().str());
    }
    Tensor3 a_tilde = apply_mask(*mask, a);
    return ProblemInstance::observed(std::move(a_tilde), b, model, x0, std::move(mask));
  }();

  const RunResult result = run_msgdt(problem, config,
                                     {x_star ? &*x_star : nullptr, o.objective ? &a : nullptr});
  fs::create_directories(o.out);
  save_t3f(o.out / "X.t3f", result.x_final);
  {
    std::ofstream csv(o.out / "trace.csv", std::ios::trunc);
    result.trace.write_csv(csv);
  }
  write_manifest(o.out / "manifest.txt", {{"command", "solve"},
                                          {"in", o.in.string()},
                                          {"mask", mask_source},
                                          {"model", model.to_string()},
                                          {"schedule", config.schedule.describe()},
                                          {"iters", std::to_string(config.iterations)},
                                          {"radius", o.radius},
                                          {"sampling", o.sampling},
                                          {"trace_every", std::to_string(o.trace_every)},
                                          {"objective", o.objective ? "1" : "0"},
                                          {"seed", std::to_string(o.seed)}});
  const TraceRecord& last = result.trace.records.back();
  std::cout << "iterations " << last.iter;
  if (last.iterate_error) std::cout << ", iterate error " << *last.iterate_error;
  std::cout << '\n';
  return 0;
}

struct ExperimentOpts {
  ExperimentSpec spec;
  std::string dims = "10000,20,10,10";
  std::vector<double> p_values{0.3, 0.5, 0.7, 0.99};
  std::string model = "uniform";
  std::string sampling = "once";
};

int run_experiment_cmd(ExperimentOpts o) {
  o.spec.dims = Dims::parse(o.dims);
  o.spec.p_values = o.p_values;
  o.spec.model = parse_model_kind(o.model);
  o.spec.sampling = parse_sampling(o.sampling);
  const auto runs = run_experiment(o.spec);
  int failed = 0;
  for (const auto& r : runs) {
    if (r.status != "ok") {
      std::cerr << "p=" << format_number(r.p) << " trial=" << r.trial << ": " << r.status << '\n';
      ++failed;
    }
  }
  const auto medians = median_final_errors(runs, o.spec.p_values);
  for (std::size_t k = 0; k < medians.size(); ++k) {
    std::cout << "p=" << format_number(o.spec.p_values[k]) << " median final error "
              << medians[k] << '\n';
  }
  return failed == 0 ? 0 : 1;
}

struct BoundsOpts {
  fs::path in;
  double p = 0.5;
  std::optional<std::string> radius;
  std::optional<double> alpha;
  double step_divisor = 5000.0;
  std::optional<fs::path> out;
};

int run_bounds(const BoundsOpts& o) {
  const Tensor3 a = load_t3f(o.in / "A.t3f");
  const Tensor3 b = load_t3f(o.in / "B.t3f");
  double radius = 0.0;
  if (o.radius) {
    radius = parse_radius(*o.radius);
  } else if (fs::exists(o.in / "Xstar.t3f")) {
    radius = 2.0 * frob_norm(load_t3f(o.in / "Xstar.t3f"));
  } else {
    throw ConfigError("--radius is required when the input has no Xstar.t3f");
  }
  if (std::isinf(radius)) throw ConfigError("bounds need a finite --radius");
  const double alpha = o.alpha.value_or(o.p * o.p / o.step_divisor);
  const BoundReport report = make_bound_report(a, b, o.p, radius, alpha);
  report.write_text(std::cout);
  if (o.out) {
    fs::create_directories(*o.out);
    {
      std::ofstream txt(*o.out / "bounds.txt", std::ios::trunc);
      report.write_text(txt);
    }
    write_text(*o.out / "bounds.csv", BoundReport::csv_header() + "\n" + report.csv_row() + "\n");
    write_manifest(*o.out / "manifest.txt", {{"command", "bounds"},
                                             {"in", o.in.string()},
                                             {"p", format_number(o.p)},
                                             {"radius", format_number(radius)},
                                             {"alpha", format_number(alpha)}});
  }
  return 0;
}

struct VerifyOpts {
  std::string what;
  ModelOpts model;
  std::optional<std::string> dims;
  std::optional<std::size_t> trials;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::optional<fs::path> out;
};

int run_verify(VerifyOpts o) {
  const MissingModel model = o.model.make();
  std::vector<CheckResult> results;
  if (o.what == "identities") {
    const Dims d = Dims::parse(o.dims.value_or("1,3,1,2"));
    results.push_back(
        verify_identities(model, d.l, d.n, o.trials.value_or(100000), o.seed, o.tol.value_or(0.05)));
  } else if (o.what == "unbiased") {
    results.push_back(verify_unbiased(model, Dims::parse(o.dims.value_or("4,3,2,2")), o.seed,
                                      o.tol.value_or(1e-10)));
  } else if (o.what == "lipschitz") {
    results.push_back(
        verify_lipschitz(model, Dims::parse(o.dims.value_or("6,3,2,2")), o.trials.value_or(1000), o.seed));
  } else if (o.what == "bounds") {
    const Dims d = Dims::parse(o.dims.value_or("6,3,2,2"));
    results = verify_second_moments(model, d, o.trials.value_or(10000), o.seed);
    results.push_back(verify_lipschitz(model, d, 1000, derive_seed(o.seed, 7)));
  } else {
    throw ConfigError("unknown check '" + o.what + "'");
  }

  bool ok = true;
  std::ostringstream report;
  for (const auto& r : results) {
    report << (r.pass ? "PASS " : "FAIL ") << r.name << " value=" << r.value << " limit=" << r.limit;
    if (!r.detail.empty()) report << ' ' << r.detail;
    report << '\n';
    ok = ok && r.pass;
  }
  std::cout << report.str();
  if (o.out) {
    fs::create_directories(*o.out);
    write_text(*o.out / ("verify_" + o.what + ".txt"), report.str());
    write_manifest(*o.out / "manifest.txt", {{"command", "verify " + o.what},
                                             {"model", model.to_string()},
                                             {"dims", o.dims.value_or("default")},
                                             {"seed", std::to_string(o.seed)}});
  }
  return ok ? 0 : 1;
}

struct FramesOpts {
  fs::path in;
  fs::path out;
  VideoSpec video;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic gradient descent for tensor systems with missing data"};
  app.set_version_flag("--version", std::string(MSGDT_VERSION));
  app.require_subcommand(1);

  GenOpts gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate Gaussian A, X* and B = A * X*");
  gen_cmd->add_option("--dims", gen.dims, "m,l,q,n")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "output directory")->required();

  MaskOpts mask;
  auto* mask_cmd = app.add_subcommand("mask", "Draw a mask for A and write the observed tensor");
  mask_cmd->add_option("--in", mask.in, "directory holding A.t3f")->required();
  mask.model.add(mask_cmd);
  mask_cmd->add_option("--seed", mask.seed)->capture_default_str();
  mask_cmd->add_option("--out", mask.out)->required();

  SolveOpts solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run the solver on a generated instance");
  solve_cmd->add_option("--in", solve.in, "directory holding A.t3f, B.t3f and optionally Xstar.t3f")
      ->required();
  solve_cmd->add_option("--mask", solve.mask, "mask T3F1 file (otherwise drawn from --seed)");
  solve.model.add(solve_cmd);
  solve_cmd->add_option("--iters", solve.iters, "iterations (default: m)");
  solve_cmd->add_option("--schedule", solve.schedule, "hybrid | constant | invsqrt")
      ->capture_default_str();
  solve_cmd->add_option("--alpha", solve.alpha, "constant step (default: p^2 / step divisor)");
  solve_cmd->add_option("--step-const", solve.step_const,
                        "c in c/sqrt(t) (default: alpha * sqrt(swap iteration))");
  solve_cmd->add_option("--swap-iter", solve.swap_iter)->capture_default_str();
  solve_cmd->add_option("--step-divisor", solve.step_divisor)->capture_default_str();
  solve_cmd->add_option("--radius", solve.radius, "projection radius or 'unbounded'")
      ->capture_default_str();
  solve_cmd->add_option("--sampling", solve.sampling, "once | redraw")->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed)->capture_default_str();
  solve_cmd->add_option("--trace-every", solve.trace_every)->capture_default_str();
  solve_cmd->add_flag("--objective", solve.objective, "record F(X) in the trace (needs a pass over A)");
  solve_cmd->add_option("--out", solve.out)->required();

  ExperimentOpts exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Synthetic runs over several p values");
  exp_cmd->add_option("--dims", exp.dims, "m,l,q,n")->capture_default_str();
  exp_cmd->add_option("--p", exp.p_values, "observation probabilities")
      ->delimiter(',')
      ->capture_default_str();
  exp_cmd->add_option("--model", exp.model)->capture_default_str();
  exp_cmd->add_option("--block-size", exp.spec.block_size)->capture_default_str();
  exp_cmd->add_option("--iters", exp.spec.iterations, "iterations (default: m)");
  exp_cmd->add_option("--swap-iter", exp.spec.swap_iter)->capture_default_str();
  exp_cmd->add_option("--step-divisor", exp.spec.step_divisor)->capture_default_str();
  exp_cmd->add_option("--sampling", exp.sampling, "once | redraw")->capture_default_str();
  exp_cmd->add_option("--trials", exp.spec.trials)->capture_default_str();
  exp_cmd->add_option("--seed", exp.spec.seed)->capture_default_str();
  exp_cmd->add_option("--trace-every", exp.spec.trace_every)->capture_default_str();
  exp_cmd->add_option("--threads", exp.spec.threads, "0: MSGDT_THREADS or all cores")
      ->capture_default_str();
  exp_cmd->add_option("--out", exp.spec.output_dir)->required();

  BoundsOpts bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Convergence constants for an instance");
  bounds_cmd->add_option("--in", bounds.in, "directory holding A.t3f and B.t3f")->required();
  bounds_cmd->add_option("--p", bounds.p)->capture_default_str();
  bounds_cmd->add_option("--radius", bounds.radius, "norm bound R (default: 2 |X*|)");
  bounds_cmd->add_option("--alpha", bounds.alpha, "fixed step (default: p^2 / step divisor)");
  bounds_cmd->add_option("--step-divisor", bounds.step_divisor)->capture_default_str();
  bounds_cmd->add_option("--out", bounds.out, "also write bounds.txt and bounds.csv here");

  VerifyOpts verify;
  auto* verify_cmd = app.add_subcommand("verify", "Randomized and enumerated self-checks");
  verify_cmd->add_option("check", verify.what, "identities | unbiased | lipschitz | bounds")
      ->required()
      ->check(CLI::IsMember({"identities", "unbiased", "lipschitz", "bounds"}));
  verify.model.block = 1;
  verify.model.add(verify_cmd);
  verify_cmd->add_option("--dims", verify.dims, "m,l,q,n (check-specific default)");
  verify_cmd->add_option("--trials", verify.trials);
  verify_cmd->add_option("--tol", verify.tol);
  verify_cmd->add_option("--seed", verify.seed)->capture_default_str();
  verify_cmd->add_option("--out", verify.out, "also write the report and a manifest here");

  FramesOpts frames;
  auto* frames_cmd = app.add_subcommand("frames", "Grayscale PGM frame stacks");
  frames_cmd->require_subcommand(1);
  auto* import_cmd = frames_cmd->add_subcommand("import", "PGM directory to a T3F1 tensor");
  import_cmd->add_option("--in", frames.in, "directory of .pgm frames")->required();
  import_cmd->add_option("--out", frames.out, "output .t3f file")->required();
  auto* export_cmd = frames_cmd->add_subcommand("export", "T3F1 tensor to a PGM directory");
  export_cmd->add_option("--in", frames.in, "input .t3f file")->required();
  export_cmd->add_option("--out", frames.out, "output directory")->required();
  auto* recon_cmd = frames_cmd->add_subcommand("reconstruct", "Recover frames from masked measurements");
  recon_cmd->add_option("--in", frames.video.frames_dir, "directory of .pgm frames")->required();
  recon_cmd->add_option("--rows", frames.video.rows, "rows of the Gaussian A")->required();
  recon_cmd->add_option("--p", frames.video.p)->capture_default_str();
  recon_cmd->add_option("--iters", frames.video.iterations, "iterations (default: rows)");
  recon_cmd->add_option("--swap-iter", frames.video.swap_iter)->capture_default_str();
  recon_cmd->add_option("--step-divisor", frames.video.step_divisor)->capture_default_str();
  recon_cmd->add_option("--seed", frames.video.seed)->capture_default_str();
  recon_cmd->add_option("--trace-every", frames.video.trace_every)->capture_default_str();
  recon_cmd->add_option("--out", frames.video.output_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*mask_cmd) return run_mask(mask);
    if (*solve_cmd) return run_solve(solve);
    if (*exp_cmd) return run_experiment_cmd(exp);
    if (*bounds_cmd) return run_bounds(bounds);
    if (*verify_cmd) return run_verify(verify);
    if (*import_cmd) {
      const Tensor3 t = ingest_frames(frames.in);
      save_t3f(frames.out, t);
      std::cout << "frames " << t.shape().str() << '\n';
      return 0;
    }
    if (*export_cmd) {
      export_frames(load_t3f(frames.in), frames.out);
      write_manifest(frames.out / "manifest.txt", {{"command", "frames export"}, {"in", frames.in.string()}});
      return 0;
    }
    if (*recon_cmd) {
      const VideoResult r = run_video_reconstruction(frames.video);
      double mean = 0.0;
      for (double v : r.frame_mae) mean += v;
      std::cout << "mean per-frame MAE " << mean / static_cast<double>(r.frame_mae.size()) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "msgdt: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
