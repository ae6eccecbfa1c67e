// Vectorized kernels against the scalar reference.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "msgdt/kernels.hpp"

using msgdt::kernels::KernelTable;

namespace {

std::vector<const KernelTable*> simd_tables() {
  std::vector<const KernelTable*> out;
  if (const auto* t = msgdt::kernels::avx2_table()) out.push_back(t);
  if (const auto* t = msgdt::kernels::neon_table()) out.push_back(t);
  return out;
}

std::vector<double> random_vec(std::size_t len, std::mt19937_64& gen, double zero_frac = 0.0) {
  std::normal_distribution<double> dist;
  std::bernoulli_distribution zero(zero_frac);
  std::vector<double> v(len);
  for (double& x : v) x = zero(gen) ? 0.0 : dist(gen);
  return v;
}

}  // namespace

TEST(Kernels, ActiveTableIsKnown) {
  const auto& t = msgdt::kernels::active();
  EXPECT_TRUE(t.name == "scalar" || t.name == "avx2" || t.name == "neon") << t.name;
  EXPECT_EQ(msgdt::kernels::scalar_table().name, "scalar");
}

TEST(Kernels, ScalarReference) {
  const KernelTable& s = msgdt::kernels::scalar_table();
  const std::vector<double> x{1, 2, 3}, y{4, 5, 6};
  EXPECT_EQ(s.dot(x.data(), y.data(), 3), 32.0);
  std::vector<double> z = y;
  s.axpy(2.0, x.data(), z.data(), 3);
  EXPECT_EQ(z, (std::vector<double>{6, 9, 12}));
  s.hadamard(x.data(), y.data(), z.data(), 3);
  EXPECT_EQ(z, (std::vector<double>{4, 10, 18}));
  // [[1,2],[3,4]] * [[1,0],[0,1]] added to ones
  const std::vector<double> a{1, 2, 3, 4}, b{1, 0, 0, 1};
  std::vector<double> c(4, 1.0);
  s.gemm_acc(a.data(), b.data(), c.data(), 2, 2, 2);
  EXPECT_EQ(c, (std::vector<double>{2, 3, 4, 5}));
}

TEST(Kernels, SimdMatchesScalar) {
  const KernelTable& s = msgdt::kernels::scalar_table();
  const auto tables = simd_tables();
  if (tables.empty()) GTEST_SKIP() << "no vector kernels on this machine";
  std::mt19937_64 gen(7);
  for (const KernelTable* v : tables) {
    for (std::size_t len = 0; len <= 67; ++len) {
      const auto x = random_vec(len, gen);
      const auto y = random_vec(len, gen);
      double abs_sum = 0.0;
      for (std::size_t i = 0; i < len; ++i) abs_sum += std::abs(x[i] * y[i]);
      EXPECT_NEAR(v->dot(x.data(), y.data(), len), s.dot(x.data(), y.data(), len),
                  4.0 * static_cast<double>(len + 1) * 0x1p-53 * abs_sum)
          << v->name << " len " << len;

      auto ys = y, yv = y;
      s.axpy(0.37, x.data(), ys.data(), len);
      v->axpy(0.37, x.data(), yv.data(), len);
      for (std::size_t i = 0; i < len; ++i) {
        EXPECT_NEAR(yv[i], ys[i], 2.0 * 0x1p-53 * (std::abs(0.37 * x[i]) + std::abs(y[i])));
      }

      std::vector<double> hs(len), hv(len);
      s.hadamard(x.data(), y.data(), hs.data(), len);
      v->hadamard(x.data(), y.data(), hv.data(), len);
      EXPECT_EQ(hs, hv) << v->name;
    }
  }
}

TEST(Kernels, SimdGemmMatchesScalar) {
  const KernelTable& s = msgdt::kernels::scalar_table();
  const auto tables = simd_tables();
  if (tables.empty()) GTEST_SKIP() << "no vector kernels on this machine";
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<std::size_t> dim(1, 13);
  for (const KernelTable* v : tables) {
    for (int rep = 0; rep < 200; ++rep) {
      const std::size_t r = dim(gen), k = dim(gen), c = dim(gen);
      const auto a = random_vec(r * k, gen, 0.3);
      const auto b = random_vec(k * c, gen);
      const auto c0 = random_vec(r * c, gen);
      auto cs = c0, cv = c0;
      s.gemm_acc(a.data(), b.data(), cs.data(), r, k, c);
      v->gemm_acc(a.data(), b.data(), cv.data(), r, k, c);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
          double bound = std::abs(c0[i * c + j]);
          for (std::size_t p = 0; p < k; ++p) bound += std::abs(a[i * k + p] * b[p * c + j]);
          ASSERT_NEAR(cv[i * c + j], cs[i * c + j], 4.0 * static_cast<double>(k + 1) * 0x1p-53 * bound)
              << v->name << " " << r << "x" << k << "x" << c;
        }
    }
  }
}
