#include <atomic>
#include <cstdlib>
#include <string_view>

#include "fourlin/simd/kernels.hpp"

namespace fourlin::simd {

#if !defined(FOURLIN_HAVE_AVX2_TU)
namespace detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace detail
#endif

#if !defined(FOURLIN_HAVE_NEON_TU)
namespace detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace detail
#endif

namespace {

bool cpu_has_avx2() {
#if defined(FOURLIN_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* automatic_choice() {
  const auto vectors = available_vector_kernels();
  const char* env = std::getenv("FOURLIN_SIMD");
  if (env != nullptr) {
    const std::string_view want{env};
    if (want == "scalar") return &scalar_kernels();
    for (const KernelTable* t : vectors) {
      if (t->name == want) return t;
    }
  }
  return vectors.empty() ? &scalar_kernels() : vectors.front();
}

std::atomic<const KernelTable*> g_override{nullptr};

}  // namespace

std::vector<const KernelTable*> available_vector_kernels() {
  std::vector<const KernelTable*> out;
  if (const KernelTable* t = detail::avx2_table(); t != nullptr && cpu_has_avx2()) out.push_back(t);
  // Advanced SIMD is mandatory on aarch64.
  if (const KernelTable* t = detail::neon_table(); t != nullptr) out.push_back(t);
  return out;
}

const KernelTable& active_kernels() {
  if (const KernelTable* t = g_override.load(std::memory_order_acquire); t != nullptr) return *t;
  static const KernelTable* chosen = automatic_choice();
  return *chosen;
}

void set_active_kernels(const KernelTable* table) { g_override.store(table, std::memory_order_release); }

}  // namespace fourlin::simd
