#include <cstdlib>
#include <string_view>

#include "msgdt/kernels.hpp"

namespace msgdt::kernels {

#if defined(MSGDT_HAVE_AVX2_KERNELS)
const KernelTable& avx2_table_unchecked();
#endif
#if defined(MSGDT_HAVE_NEON_KERNELS)
const KernelTable& neon_table_unchecked();
#endif

const KernelTable* avx2_table() {
#if defined(MSGDT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(MSGDT_HAVE_NEON_KERNELS)
  // Advanced SIMD is mandatory on AArch64.
  return &neon_table_unchecked();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& resolve() {
  const char* env = std::getenv("MSGDT_SIMD");
  const std::string_view request = env != nullptr ? env : "";
  if (request == "scalar") return scalar_table();
  if (request == "avx2" && avx2_table() != nullptr) return *avx2_table();
  if (request == "neon" && neon_table() != nullptr) return *neon_table();
  if (const KernelTable* t = avx2_table()) return *t;
  if (const KernelTable* t = neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace msgdt::kernels
