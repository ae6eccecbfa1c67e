#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "msgdt/analysis.hpp"
#include "msgdt/experiment.hpp"
#include "msgdt/hermitian_eig.hpp"
#include "msgdt/verify.hpp"
#include "oracles.hpp"

using namespace msgdt;

TEST(ComputeG, SingleUnitRow) {
  Tensor3 a(1, 1, 1);
  a(0, 0, 0) = 1.0;
  const Tensor3 b(1, 1, 1);
  EXPECT_DOUBLE_EQ(compute_g(a, b, 1.0, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(compute_g_star(a, 1.0, 1.0), 4.0);
}

TEST(ComputeG, ZeroData) {
  EXPECT_EQ(compute_g(Tensor3(3, 2, 2), Tensor3(3, 1, 2), 2.0, 0.5), 0.0);
}

TEST(ComputeG, MatchesHandEvaluation) {
  std::mt19937_64 gen(1);
  const Tensor3 a = oracle::gaussian(5, 3, 2, gen);
  const Tensor3 b = oracle::gaussian(5, 2, 2, gen);
  const double p = 0.6, r = 1.7, n = 2.0, m = 5.0;
  double s4 = 0, s3 = 0, s2 = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double ai = oracle::frob(row_slice(a, i)), bi = oracle::frob(row_slice(b, i));
    s4 += std::pow(ai, 4);
    s3 += std::pow(ai, 3) * bi;
    s2 += ai * ai * bi * bi;
  }
  const double gs = 4 * n * n * r * r / (std::pow(p, 3) * m) * s4;
  const double g = gs + 4 * std::pow(n, 1.5) * r / (p * p * m) * s3 + 2 * n / (p * p * m) * s2;
  EXPECT_NEAR(compute_g(a, b, r, p), g, 1e-12 * g);
  EXPECT_NEAR(compute_g_star(a, r, p), gs, 1e-12 * gs);
  EXPECT_LE(compute_g_star(a, r, p), compute_g(a, b, r, p));
}

TEST(ComputeG, RejectsBadP) {
  EXPECT_THROW(compute_g(Tensor3(1, 1, 1), Tensor3(1, 1, 1), 1.0, 0.0), ConfigError);
  EXPECT_THROW(compute_lg(Tensor3(1, 1, 1), -1.0), ConfigError);
}

TEST(ComputeLg, Examples) {
  Tensor3 a(2, 2, 3);
  a(1, 0, 2) = 2.0;
  a(0, 1, 0) = 1.0;
  EXPECT_DOUBLE_EQ(compute_lg(a, 0.5), 48.0);
  EXPECT_DOUBLE_EQ(compute_lg(Tensor3::identity(4, 3), 1.0), 3.0);
}

TEST(ComputeMu, IdentityTensor) {
  const StrongConvexity s = compute_mu(Tensor3::identity(3, 4));
  EXPECT_NEAR(s.sigma_min, 1.0, 1e-12);
  EXPECT_NEAR(s.mu, 1.0 / 3.0, 1e-12);
}

TEST(ComputeMu, MatchesBcircSvd) {
  std::mt19937_64 gen(2);
  for (int rep = 0; rep < 5; ++rep) {
    const Tensor3 a = oracle::gaussian(5, 3, 3, gen);
    const double want = oracle::sigma_min(a);
    const StrongConvexity s = compute_mu(a);
    EXPECT_NEAR(s.sigma_min, want, 1e-8 * want);
    EXPECT_NEAR(s.mu, want * want / 5.0, 1e-8 * want * want / 5.0);
  }
}

TEST(ComputeMu, RequiresTallTensor) {
  EXPECT_THROW(compute_mu(Tensor3(2, 3, 2)), DimensionError);
}

TEST(ComputeMu, StrongConvexityInequality) {
  const SyntheticData d = gen_synthetic({8, 3, 2, 3}, 3);
  const double mu = compute_mu(d.a).mu;
  std::mt19937_64 gen(4);
  for (int rep = 0; rep < 200; ++rep) {
    const Tensor3 x = oracle::gaussian(3, 2, 3, gen);
    const Tensor3 y = oracle::gaussian(3, 2, 3, gen);
    const double lhs = objective(d.a, d.b, y);
    const double diff = frob_norm(y - x);
    const double rhs = objective(d.a, d.b, x) + inner(full_gradient(d.a, d.b, x), y - x) +
                       0.5 * mu * diff * diff;
    EXPECT_GE(lhs, rhs - 1e-12 * (lhs + std::abs(rhs)));
  }
}

TEST(HermitianEigenvalues, MatchesEigen) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> dist;
  for (std::size_t dim : {1u, 2u, 3u, 5u, 8u}) {
    Eigen::MatrixXcd m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) m(i, j) = {dist(gen), dist(gen)};
    const Eigen::MatrixXcd h = m + m.adjoint();
    std::vector<std::complex<double>> flat(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) flat[i * dim + j] = h(i, j);
    const auto ours = hermitian_eigenvalues(flat, dim);
    const Eigen::VectorXd want = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues();
    ASSERT_EQ(ours.size(), dim);
    const double scale = want.cwiseAbs().maxCoeff();
    for (std::size_t k = 0; k < dim; ++k) {
      EXPECT_NEAR(ours[k], want(static_cast<Eigen::Index>(k)), 1e-12 * scale) << "dim " << dim;
    }
  }
}

TEST(ConvergenceRatio, Arithmetic) {
  const ConvergenceRatio r = convergence_ratio(0.25, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(r.value, 0.75);
  EXPECT_FALSE(r.clamped);
  EXPECT_DOUBLE_EQ(horizon_bound(0.25, 1.0, 2.0, 3.0), 1.5);
}

TEST(ConvergenceRatio, SmallStepLimit) {
  const double mu = 0.7;
  EXPECT_NEAR(convergence_ratio(1e-12, mu, 2.0).value, 1.0 - 2e-12 * mu, 1e-15);
  EXPECT_LT(horizon_bound(1e-12, mu, 2.0, 5.0), 1e-10);
}

TEST(ConvergenceRatio, Preconditions) {
  EXPECT_THROW(convergence_ratio(0.5, 1.0, 2.0), ConfigError);
  EXPECT_THROW(convergence_ratio(0.6, 1.0, 2.0), ConfigError);
  EXPECT_THROW(convergence_ratio(0.1, 0.0, 2.0), ConfigError);
  EXPECT_THROW(horizon_bound(0.5, 1.0, 2.0, 1.0), ConfigError);
  try {
    convergence_ratio(1.0, 1.0, 2.0);
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("step size too large"), std::string::npos);
  }
}

TEST(ConvergenceRatio, ClampsWhenVacuous) {
  // 1 - 2 * 0.4 * 10 * (1 - 0.4) = -3.8
  const ConvergenceRatio r = convergence_ratio(0.4, 10.0, 1.0);
  EXPECT_TRUE(r.clamped);
  EXPECT_EQ(r.value, 0.0);
}

TEST(ConvergenceRatio, GeometricSeriesClosure) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int rep = 0; rep < 100; ++rep) {
    const double lg = 1.0 + 10.0 * u(gen);
    const double mu = 0.2 * lg * u(gen);
    const double alpha = u(gen) / lg;
    const double gs = 100.0 * u(gen);
    const ConvergenceRatio r = convergence_ratio(alpha, mu, lg);
    if (r.clamped) continue;
    const double lhs = 2 * alpha * alpha * gs / (1 - r.value);
    EXPECT_NEAR(lhs, horizon_bound(alpha, mu, lg, gs), 1e-12 * lhs);
  }
}

TEST(DecayingStepBound, Values) {
  EXPECT_DOUBLE_EQ(decaying_step_bound(1, 2.0, 0.5, 3.0), (4.0 / 0.5 + 0.5 * 3.0) * 2.0);
  const double t100 = (4.0 / 0.5 + 1.5) * (2.0 + std::log(100.0)) / 10.0;
  EXPECT_DOUBLE_EQ(decaying_step_bound(100, 2.0, 0.5, 3.0), t100);
  double prev = decaying_step_bound(8, 2.0, 0.5, 3.0);
  for (std::size_t t = 9; t < 5000; ++t) {
    const double cur = decaying_step_bound(t, 2.0, 0.5, 3.0);
    ASSERT_LT(cur, prev) << t;
    prev = cur;
  }
}

TEST(BoundReport, Serialization) {
  const SyntheticData d = gen_synthetic({20, 3, 2, 2}, 7);
  const double radius = 2.0 * frob_norm(d.x_star);
  const double lg = compute_lg(d.a, 0.5);
  const BoundReport rep = make_bound_report(d.a, d.b, 0.5, radius, 0.5 / lg);
  EXPECT_EQ(rep.diameter, 2.0 * radius);
  EXPECT_DOUBLE_EQ(rep.lg, lg);
  ASSERT_TRUE(rep.r.has_value());
  EXPECT_LT(*rep.r, 1.0);
  EXPECT_TRUE(rep.warning.empty());
  std::ostringstream txt;
  rep.write_text(txt);
  EXPECT_NE(txt.str().find("G="), std::string::npos);
  EXPECT_NE(txt.str().find("horizon="), std::string::npos);
  const std::string header = BoundReport::csv_header();
  const std::string row = rep.csv_row();
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));

  const BoundReport bad = make_bound_report(d.a, d.b, 0.5, radius, 2.0 / lg);
  EXPECT_FALSE(bad.r.has_value());
  EXPECT_FALSE(bad.warning.empty());
}

TEST(SecondMoments, SampleMeansBelowBounds) {
  for (const auto& m : {MissingModel::uniform(0.5), MissingModel::column_block(0.5, 1),
                        MissingModel::frontal_slice(0.5)}) {
    for (const CheckResult& r : verify_second_moments(m, {6, 3, 2, 2}, 2000, 8)) {
      EXPECT_TRUE(r.pass) << m.to_string() << " " << r.name << " " << r.value << " > " << r.limit;
    }
  }
}
