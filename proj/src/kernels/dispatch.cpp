#include <atomic>
#include <cstdlib>
#include <string_view>

#include "pnmf/kernels.hpp"

#if defined(PNMF_HAVE_AVX2)
#include "kernels/avx2_table.hpp"
#endif

namespace pnmf::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(PNMF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* choose() {
  const KernelTable* best = avx2();
  if (const char* env = std::getenv("PNMF_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar();
    if (want == "avx2" && best != nullptr) return best;
  }
  return best != nullptr ? best : &scalar();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{choose()};
  return current;
}

}  // namespace

const KernelTable* avx2() {
#if defined(PNMF_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void set_active(const KernelTable& table) { slot().store(&table, std::memory_order_release); }

}  // namespace pnmf::kernels
