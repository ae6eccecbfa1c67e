// Randomized algebraic properties of the t-product checked against the
// block-circulant oracle.

#include <gtest/gtest.h>

#include <random>

#include "msgdt/tensor.hpp"
#include "oracles.hpp"

using namespace msgdt;

namespace {

struct Dims4 {
  std::size_t m, l, q, n;
};

Dims4 random_dims(std::mt19937_64& gen, std::size_t max_mlq, std::size_t max_n) {
  std::uniform_int_distribution<std::size_t> d(1, max_mlq), dn(1, max_n);
  return {d(gen), d(gen), d(gen), dn(gen)};
}

}  // namespace

TEST(TprodProperty, MatchesOracleOnRandomInstances) {
  std::mt19937_64 gen(101);
  for (int rep = 0; rep < 100; ++rep) {
    const Dims4 d = random_dims(gen, 8, 8);
    const Tensor3 a = oracle::gaussian(d.m, d.l, d.n, gen);
    const Tensor3 x = oracle::gaussian(d.l, d.q, d.n, gen);
    ASSERT_LE(oracle::rel_err(tprod(a, x), oracle::tprod(a, x)), 1e-12) << "rep " << rep;
  }
}

TEST(TprodProperty, SqrtNSubMultiplicative) {
  std::mt19937_64 gen(102);
  for (int rep = 0; rep < 200; ++rep) {
    const Dims4 d = random_dims(gen, 6, 6);
    const Tensor3 a = oracle::gaussian(d.m, d.l, d.n, gen);
    const Tensor3 x = oracle::gaussian(d.l, d.q, d.n, gen);
    EXPECT_LE(frob_norm(tprod(a, x)),
              std::sqrt(static_cast<double>(d.n)) * frob_norm(a) * frob_norm(x));
  }
}

TEST(TprodProperty, AllOnesAttainsSubMultiplicativeBound) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const Tensor3 a = Tensor3::ones({3, 4, n});
    const Tensor3 x = Tensor3::ones({4, 2, n});
    const Tensor3 r = tprod(a, x);
    // Squared norms are sums of integers, so equality is exact.
    EXPECT_EQ(inner(r, r), static_cast<double>(n) * inner(a, a) * inner(x, x));
  }
}

TEST(TprodProperty, TransposeReversesProducts) {
  std::mt19937_64 gen(103);
  for (int rep = 0; rep < 50; ++rep) {
    const Dims4 d = random_dims(gen, 6, 5);
    const Tensor3 a = oracle::gaussian(d.m, d.l, d.n, gen);
    const Tensor3 b = oracle::gaussian(d.l, d.q, d.n, gen);
    const Tensor3 want = oracle::transpose(oracle::tprod(a, b));
    EXPECT_LE(oracle::rel_err(tprod(transpose(b), transpose(a)), want), 1e-12);
  }
}

TEST(TprodProperty, TransposeIsTheAdjoint) {
  std::mt19937_64 gen(104);
  for (int rep = 0; rep < 50; ++rep) {
    const Dims4 d = random_dims(gen, 6, 5);
    const Tensor3 a = oracle::gaussian(d.m, d.l, d.n, gen);
    const Tensor3 x = oracle::gaussian(d.l, d.q, d.n, gen);
    const Tensor3 y = oracle::gaussian(d.m, d.q, d.n, gen);
    const double lhs = inner(tprod(a, x), y);
    const double rhs = inner(x, tprod(transpose(a), y));
    const double scale = frob_norm(a) * frob_norm(x) * frob_norm(y);
    EXPECT_NEAR(lhs, rhs, 1e-12 * scale);
  }
}

TEST(TprodProperty, Associative) {
  std::mt19937_64 gen(105);
  for (int rep = 0; rep < 30; ++rep) {
    const Dims4 d = random_dims(gen, 5, 5);
    const Tensor3 a = oracle::gaussian(d.m, d.l, d.n, gen);
    const Tensor3 b = oracle::gaussian(d.l, d.q, d.n, gen);
    const Tensor3 c = oracle::gaussian(d.q, d.m, d.n, gen);
    EXPECT_LE(oracle::rel_err(tprod(tprod(a, b), c), tprod(a, tprod(b, c))), 1e-12);
  }
}

TEST(TubeDftProperty, SingularValuesMatchBcirc) {
  std::mt19937_64 gen(106);
  for (int rep = 0; rep < 20; ++rep) {
    const Dims4 d = random_dims(gen, 5, 5);
    const Tensor3 a = oracle::gaussian(d.m, d.l, d.n, gen);
    const ComplexTensor3 f = tube_dft(a);
    std::vector<double> ours;
    for (std::size_t k = 0; k < d.n; ++k) {
      Eigen::MatrixXcd s(d.m, d.l);
      for (std::size_t i = 0; i < d.m; ++i)
        for (std::size_t j = 0; j < d.l; ++j) s(i, j) = f(i, j, k);
      const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(s).singularValues();
      ours.insert(ours.end(), sv.data(), sv.data() + sv.size());
    }
    Eigen::VectorXd want = Eigen::JacobiSVD<oracle::Mat>(oracle::bcirc(a)).singularValues();
    std::sort(ours.begin(), ours.end());
    std::sort(want.data(), want.data() + want.size());
    for (std::size_t idx = 0; idx < ours.size(); ++idx) {
      EXPECT_NEAR(ours[idx], want(static_cast<Eigen::Index>(idx)), 1e-8 * (1.0 + want.maxCoeff()));
    }
  }
}

TEST(HadamardProperty, CommutesAndDistributes) {
  std::mt19937_64 gen(107);
  for (int rep = 0; rep < 20; ++rep) {
    const Dims4 d = random_dims(gen, 6, 4);
    const Tensor3 a = oracle::gaussian(d.m, d.l, d.n, gen);
    const Tensor3 b = oracle::gaussian(d.m, d.l, d.n, gen);
    const Tensor3 c = oracle::gaussian(d.m, d.l, d.n, gen);
    EXPECT_EQ(hadamard(a, b), hadamard(b, a));
    EXPECT_LE(oracle::rel_err(hadamard(a, b + c), hadamard(a, b) + hadamard(a, c)), 1e-15);
  }
}
