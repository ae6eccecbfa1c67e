#include "msgdt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "msgdt/frames.hpp"
#include "msgdt/kernels.hpp"
#include "msgdt/random.hpp"

namespace msgdt {

Dims Dims::parse(const std::string& text) {
  std::vector<std::size_t> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t v = 0;
    auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size() || v == 0) {
      throw ConfigError("bad dimension '" + item + "' in '" + text + "'");
    }
    parts.push_back(v);
  }
  if (parts.size() != 4) throw ConfigError("dims must be m,l,q,n; got '" + text + "'");
  return {parts[0], parts[1], parts[2], parts[3]};
}

std::string Dims::str() const {
  return std::to_string(m) + "," + std::to_string(l) + "," + std::to_string(q) + "," +
         std::to_string(n);
}

SyntheticData gen_synthetic(const Dims& dims, std::uint64_t seed) {
  Rng rng(seed);
  Tensor3 a(dims.m, dims.l, dims.n);
  for (double& v : a.values()) v = rng.normal();
  Tensor3 x_star(dims.l, dims.q, dims.n);
  for (double& v : x_star.values()) v = rng.normal();
  Tensor3 b = tprod(a, x_star);
  return {std::move(a), std::move(x_star), std::move(b)};
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "uniform") return ModelKind::uniform;
  if (name == "colblock") return ModelKind::colblock;
  if (name == "frontal") return ModelKind::frontal;
  throw ConfigError("unknown model '" + name + "' (expected uniform, colblock or frontal)");
}

MissingModel make_model(ModelKind kind, double p, std::size_t block_size) {
  switch (kind) {
    case ModelKind::uniform:
      return MissingModel::uniform(p);
    case ModelKind::colblock:
      return MissingModel::column_block(p, block_size);
    case ModelKind::frontal:
      return MissingModel::frontal_slice(p);
  }
  throw ConfigError("unknown model kind");
}

void ExperimentSpec::validate() const {
  if (p_values.empty()) throw ConfigError("no experiments requested");
  for (double p : p_values) make_model(model, p, block_size).check_columns(dims.l);
  if (dims.m == 0 || dims.l == 0 || dims.q == 0 || dims.n == 0) {
    throw ConfigError("dims must be positive");
  }
  if (trials == 0) throw ConfigError("trials must be at least 1");
  if (swap_iter == 0) throw ConfigError("swap iteration must be positive");
  if (!(step_divisor > 0.0)) throw ConfigError("step divisor must be positive");
  if (trace_every == 0) throw ConfigError("trace interval must be positive");
  if (output_dir.empty()) throw ConfigError("output directory is required");
}

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("MSGDT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path, std::ios::trunc);
  out << "msgdt_version=" << MSGDT_VERSION << '\n';
  out << "kernels=" << kernels::active().name << '\n';
  for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

RunSummary run_one(const ExperimentSpec& spec, std::size_t p_index, std::size_t trial) {
  RunSummary summary;
  summary.p = spec.p_values[p_index];
  summary.trial = trial;
  try {
    const std::uint64_t trial_seed = derive_seed(spec.seed, trial);
    const SyntheticData data = gen_synthetic(spec.dims, derive_seed(trial_seed, 0));
    const MissingModel model = make_model(spec.model, summary.p, spec.block_size);
    const Tensor3 x0(spec.dims.l, spec.dims.q, spec.dims.n);

    SolverConfig config;
    config.iterations = spec.iterations.value_or(spec.dims.m);
    const double alpha = summary.p * summary.p / spec.step_divisor;
    config.schedule = StepSchedule::hybrid_matched(alpha, spec.swap_iter);
    config.sampling = spec.sampling;
    config.seed = derive_seed(trial_seed, 2 + 2 * p_index);
    config.trace_every = spec.trace_every;
    config.extra_trace_iters = {spec.swap_iter};
    summary.iterations = config.iterations;

    const auto problem = [&] {
      if (spec.sampling == Sampling::redraw_mask) {
        return ProblemInstance::redraw(data.a, data.b, model, x0);
      }
      Rng mask_rng(derive_seed(trial_seed, 1 + 2 * p_index));
      BinaryMask mask = draw_mask(model, spec.dims.m, spec.dims.l, spec.dims.n, mask_rng);
      Tensor3 a_tilde = apply_mask(mask, data.a);
      return ProblemInstance::observed(std::move(a_tilde), data.b, model, x0);
    }();

    const RunResult result = run_msgdt(problem, config, {&data.x_star, nullptr});
    {
      std::ofstream out(spec.output_dir / ("trace_p" + format_number(summary.p) + "_trial" +
                                           std::to_string(trial) + ".csv"),
                        std::ios::trunc);
      result.trace.write_csv(out);
    }
    summary.initial_error = *result.trace.records.front().iterate_error;
    summary.final_error = *result.trace.records.back().iterate_error;
    if (const TraceRecord* rec = result.trace.find(spec.swap_iter)) {
      summary.swap_error = rec->iterate_error;
    }
  } catch (const std::exception& e) {
    summary.status = e.what();
  }
  return summary;
}

}  // namespace

std::vector<RunSummary> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::filesystem::create_directories(spec.output_dir);

  const std::size_t jobs = spec.p_values.size() * spec.trials;
  std::vector<RunSummary> results(jobs);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      results[j] = run_one(spec, j / spec.trials, j % spec.trials);
    }
  };
  const std::size_t threads =
      std::min(jobs, spec.threads != 0 ? spec.threads : default_thread_count());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  {
    std::ofstream out(spec.output_dir / "summary.csv", std::ios::trunc);
    out << "p,trial,iterations,initial_error,swap_error,final_error,status\n";
    for (const auto& r : results) {
      out << format_number(r.p) << ',' << r.trial << ',' << r.iterations << ','
          << fmt17(r.initial_error) << ',' << (r.swap_error ? fmt17(*r.swap_error) : "") << ','
          << fmt17(r.final_error) << ',' << csv_safe(r.status) << '\n';
    }
  }

  std::string ps;
  for (double p : spec.p_values) ps += (ps.empty() ? "" : ",") + format_number(p);
  write_manifest(spec.output_dir / "manifest.txt",
                 {{"command", "experiment"},
                  {"dims", spec.dims.str()},
                  {"p", ps},
                  {"model", make_model(spec.model, spec.p_values.front(), spec.block_size).to_string()},
                  {"block_size", std::to_string(spec.block_size)},
                  {"iters", std::to_string(spec.iterations.value_or(spec.dims.m))},
                  {"swap_iter", std::to_string(spec.swap_iter)},
                  {"step_divisor", format_number(spec.step_divisor)},
                  {"sampling", spec.sampling == Sampling::redraw_mask ? "redraw" : "once"},
                  {"trials", std::to_string(spec.trials)},
                  {"trace_every", std::to_string(spec.trace_every)},
                  {"seed", std::to_string(spec.seed)}});
  return results;
}

std::vector<double> median_final_errors(const std::vector<RunSummary>& runs,
                                        const std::vector<double>& p_values) {
  std::vector<double> medians;
  for (double p : p_values) {
    std::vector<double> errs;
    for (const auto& r : runs) {
      if (r.p == p && r.status == "ok") errs.push_back(r.final_error);
    }
    if (errs.empty()) {
      medians.push_back(std::nan(""));
      continue;
    }
    std::sort(errs.begin(), errs.end());
    const std::size_t h = errs.size() / 2;
    medians.push_back(errs.size() % 2 == 1 ? errs[h] : 0.5 * (errs[h - 1] + errs[h]));
  }
  return medians;
}

VideoResult run_video_reconstruction(const VideoSpec& spec) {
  const Tensor3 x_star = ingest_frames(spec.frames_dir);
  if (spec.rows == 0) throw ConfigError("video reconstruction needs rows > 0");
  const std::size_t l = x_star.rows(), n = x_star.slices();

  Rng data_rng(derive_seed(spec.seed, 0));
  Tensor3 a(spec.rows, l, n);
  for (double& v : a.values()) v = data_rng.normal();
  Tensor3 b = tprod(a, x_star);

  const MissingModel model = MissingModel::uniform(spec.p);
  Rng mask_rng(derive_seed(spec.seed, 1));
  const BinaryMask mask = draw_mask(model, spec.rows, l, n, mask_rng);
  auto problem = ProblemInstance::observed(apply_mask(mask, a), std::move(b), model,
                                           Tensor3::filled(x_star.shape(), spec.initial_value));

  SolverConfig config;
  config.iterations = spec.iterations.value_or(spec.rows);
  config.schedule = StepSchedule::hybrid_matched(spec.p * spec.p / spec.step_divisor, spec.swap_iter);
  config.seed = derive_seed(spec.seed, 2);
  config.trace_every = spec.trace_every;
  RunResult result = run_msgdt(problem, config, {&x_star, nullptr});

  std::filesystem::create_directories(spec.output_dir);
  export_frames(result.x_final, spec.output_dir / "frames");
  VideoResult out{per_frame_mae(result.x_final, x_star), std::move(result.trace)};
  {
    std::ofstream csv(spec.output_dir / "frame_mae.csv", std::ios::trunc);
    csv << "frame,mae\n";
    for (std::size_t k = 0; k < out.frame_mae.size(); ++k) csv << k << ',' << fmt17(out.frame_mae[k]) << '\n';
  }
  {
    std::ofstream csv(spec.output_dir / "trace.csv", std::ios::trunc);
    out.trace.write_csv(csv);
  }
  write_manifest(spec.output_dir / "manifest.txt",
                 {{"command", "frames reconstruct"},
                  {"frames_dir", spec.frames_dir.string()},
                  {"rows", std::to_string(spec.rows)},
                  {"p", format_number(spec.p)},
                  {"iters", std::to_string(config.iterations)},
                  {"swap_iter", std::to_string(spec.swap_iter)},
                  {"step_divisor", format_number(spec.step_divisor)},
                  {"initial_value", format_number(spec.initial_value)},
                  {"seed", std::to_string(spec.seed)}});
  return out;
}

}  // namespace msgdt
