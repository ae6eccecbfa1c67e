#include "msgdt/missing.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace msgdt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void check_probability(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ConfigError("observation probability must lie in (0, 1], got " + std::to_string(p));
  }
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("bad value for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

MissingModel MissingModel::uniform(double p) {
  check_probability(p);
  return MissingModel(UniformMissing{p});
}

MissingModel MissingModel::column_block(double p, std::size_t block) {
  check_probability(p);
  if (block == 0) throw ConfigError("column block size must be positive");
  return MissingModel(ColumnBlockMissing{p, block});
}

MissingModel MissingModel::frontal_slice(double p) {
  check_probability(p);
  return MissingModel(FrontalSliceMissing{p});
}

double MissingModel::p() const {
  return std::visit([](const auto& m) { return m.p; }, model_);
}

std::string_view MissingModel::kind() const {
  return std::visit(Overloaded{[](const UniformMissing&) { return std::string_view("uniform"); },
                               [](const ColumnBlockMissing&) { return std::string_view("colblock"); },
                               [](const FrontalSliceMissing&) { return std::string_view("frontal"); }},
                    model_);
}

std::string MissingModel::to_string() const {
  std::string out = std::string(kind()) + " p=" + format_double(p());
  if (const auto* cb = std::get_if<ColumnBlockMissing>(&model_)) {
    out += " b=" + std::to_string(cb->block);
  }
  return out;
}

MissingModel MissingModel::parse(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string kind;
  in >> kind;
  std::optional<double> p;
  std::optional<std::size_t> block;
  std::string field;
  while (in >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ConfigError("bad model field '" + field + "'");
    const std::string_view key = std::string_view(field).substr(0, eq);
    const std::string_view value = std::string_view(field).substr(eq + 1);
    if (key == "p") {
      p = parse_double(value, "p");
    } else if (key == "b") {
      std::size_t b = 0;
      auto res = std::from_chars(value.data(), value.data() + value.size(), b);
      if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw ConfigError("bad value for b: '" + std::string(value) + "'");
      }
      block = b;
    } else {
      throw ConfigError("unknown model field '" + std::string(key) + "'");
    }
  }
  if (!p) throw ConfigError("model line is missing p=: '" + std::string(line) + "'");
  if (kind == "uniform") {
    if (block) throw ConfigError("uniform model takes no block size");
    return uniform(*p);
  }
  if (kind == "colblock") {
    if (!block) throw ConfigError("colblock model needs b=");
    return column_block(*p, *block);
  }
  if (kind == "frontal") {
    if (block) throw ConfigError("frontal model takes no block size");
    return frontal_slice(*p);
  }
  throw ConfigError("unknown missing-data model '" + kind + "'");
}

void MissingModel::check_columns(std::size_t cols) const {
  if (const auto* cb = std::get_if<ColumnBlockMissing>(&model_)) {
    if (cols % cb->block != 0) {
      throw ConfigError("column block size " + std::to_string(cb->block) +
                        " does not divide column count " + std::to_string(cols));
    }
  }
}

std::size_t MissingModel::units_per_row(std::size_t cols, std::size_t slices) const {
  check_columns(cols);
  return std::visit(
      Overloaded{[&](const UniformMissing&) { return cols * slices; },
                 [&](const ColumnBlockMissing& cb) { return cols / cb.block; },
                 [&](const FrontalSliceMissing&) { return slices; }},
      model_);
}

bool operator==(const MissingModel& a, const MissingModel& b) {
  if (a.model_.index() != b.model_.index() || a.p() != b.p()) return false;
  const auto* ca = std::get_if<ColumnBlockMissing>(&a.model_);
  const auto* cb = std::get_if<ColumnBlockMissing>(&b.model_);
  return ca == nullptr || ca->block == cb->block;
}

BinaryMask::BinaryMask(Tensor3 values) : values_(std::move(values)) {
  for (double v : values_.values()) {
    if (v != 0.0 && v != 1.0) throw ConfigError("binary mask entries must be 0 or 1");
  }
}

double BinaryMask::observed_fraction() const {
  double ones = 0.0;
  for (double v : values_.values()) ones += v;
  return ones / static_cast<double>(values_.size());
}

Tensor3 row_mask_from_units(const MissingModel& model, std::size_t cols, std::size_t slices,
                            const std::function<bool(std::size_t)>& observed) {
  model.check_columns(cols);
  Tensor3 mask(1, cols, slices);
  std::visit(Overloaded{[&](const UniformMissing&) {
                          for (std::size_t k = 0; k < slices; ++k) {
                            for (std::size_t j = 0; j < cols; ++j) {
                              mask(0, j, k) = observed(k * cols + j) ? 1.0 : 0.0;
                            }
                          }
                        },
                        [&](const ColumnBlockMissing& cb) {
                          for (std::size_t blk = 0; blk < cols / cb.block; ++blk) {
                            const double v = observed(blk) ? 1.0 : 0.0;
                            for (std::size_t k = 0; k < slices; ++k) {
                              for (std::size_t j = blk * cb.block; j < (blk + 1) * cb.block; ++j) {
                                mask(0, j, k) = v;
                              }
                            }
                          }
                        },
                        [&](const FrontalSliceMissing&) {
                          for (std::size_t k = 0; k < slices; ++k) {
                            const double v = observed(k) ? 1.0 : 0.0;
                            for (std::size_t j = 0; j < cols; ++j) mask(0, j, k) = v;
                          }
                        }},
             model.variant());
  return mask;
}

Tensor3 draw_row_mask(const MissingModel& model, std::size_t cols, std::size_t slices, Rng& rng) {
  const double p = model.p();
  // row_mask_from_units queries each unit exactly once, in unit order.
  return row_mask_from_units(model, cols, slices,
                             [&](std::size_t) { return rng.bernoulli(p); });
}

BinaryMask draw_mask(const MissingModel& model, std::size_t rows, std::size_t cols,
                     std::size_t slices, Rng& rng) {
  model.check_columns(cols);
  Tensor3 mask(rows, cols, slices);
  for (std::size_t i = 0; i < rows; ++i) {
    const Tensor3 row = draw_row_mask(model, cols, slices, rng);
    for (std::size_t k = 0; k < slices; ++k) {
      std::copy(row.slice(k).begin(), row.slice(k).end(), mask.slice(k).begin() + i * cols);
    }
  }
  return BinaryMask(std::move(mask));
}

Tensor3 apply_mask(const BinaryMask& mask, const Tensor3& a) { return hadamard(mask.tensor(), a); }

Tensor3 correction_tensor(const MissingModel& model, std::size_t cols, std::size_t slices) {
  model.check_columns(cols);
  Tensor3 c(cols, cols, slices);
  std::visit(Overloaded{[&](const UniformMissing&) {
                          for (std::size_t j = 0; j < cols; ++j) c(j, j, 0) = 1.0;
                        },
                        [&](const ColumnBlockMissing& cb) {
                          for (std::size_t k = 0; k < slices; ++k) {
                            for (std::size_t x = 0; x < cols; ++x) {
                              for (std::size_t y = 0; y < cols; ++y) {
                                if (x / cb.block == y / cb.block) c(x, y, k) = 1.0;
                              }
                            }
                          }
                        },
                        [&](const FrontalSliceMissing&) {
                          for (std::size_t x = 0; x < cols; ++x) {
                            for (std::size_t y = 0; y < cols; ++y) c(x, y, 0) = 1.0;
                          }
                        }},
             model.variant());
  return c;
}

void for_each_row_mask(const MissingModel& model, std::size_t cols, std::size_t slices,
                       const std::function<void(const Tensor3&, double)>& visit) {
  const std::size_t units = model.units_per_row(cols, slices);
  if (units >= 31) throw ConfigError("too many mask units to enumerate");
  const double p = model.p();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << units); ++bits) {
    const auto on = static_cast<int>(std::popcount(bits));
    const double prob = std::pow(p, on) * std::pow(1.0 - p, static_cast<int>(units) - on);
    if (prob == 0.0) continue;
    visit(row_mask_from_units(model, cols, slices,
                              [bits](std::size_t u) { return ((bits >> u) & 1u) != 0; }),
          prob);
  }
}

ExpectationReport verify_expectation_identity(const Tensor3& a_row, const MissingModel& model,
                                              std::size_t trials, Rng& rng) {
  if (a_row.rows() != 1) throw DimensionError("expected a row slice, got " + a_row.shape().str());
  if (trials == 0) throw ConfigError("need at least one trial");
  const std::size_t l = a_row.cols(), n = a_row.slices();
  const double p = model.p();
  const Tensor3 c = correction_tensor(model, l, n);
  const Tensor3 gram = tprod(transpose(a_row), a_row);

  Tensor3 sum(l, l, n);
  for (std::size_t t = 0; t < trials; ++t) {
    const Tensor3 observed = hadamard(draw_row_mask(model, l, n, rng), a_row);
    sum += tprod(transpose(observed), observed);
  }
  const Tensor3 estimate = (1.0 / static_cast<double>(trials)) * std::move(sum);

  const Tensor3 complement = Tensor3::ones(c.shape()) - c;
  const auto deviation = [](const Tensor3& est, const Tensor3& target) {
    const double floor = 0.1 * max_abs(target);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < est.size(); ++idx) {
      const double diff = std::abs(est.values()[idx] - target.values()[idx]);
      if (diff == 0.0) continue;
      const double scale = std::max(std::abs(target.values()[idx]), floor);
      worst = std::max(worst, scale > 0.0 ? diff / scale : diff);
    }
    return worst;
  };

  ExpectationReport report;
  report.trials = trials;
  report.max_rel_err_c1 = deviation(hadamard(c, estimate), p * hadamard(c, gram));
  report.max_rel_err_c2 =
      deviation(hadamard(complement, estimate), (p * p) * hadamard(complement, gram));
  return report;
}

}  // namespace msgdt
