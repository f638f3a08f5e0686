#include <cstdlib>
#include <cstring>

#include "hidisc/kernels.hpp"
#include "kernels_internal.hpp"

namespace hidisc::kernels {

bool cpu_supports_avx2() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* avx2_table() noexcept {
#if defined(HIDISC_HAVE_AVX2)
  if (cpu_supports_avx2()) return &avx2_table_unchecked();
#endif
  return nullptr;
}

const KernelTable& active() noexcept {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* forced = std::getenv("HIDISC_SIMD");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return table;
}

const char* isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace hidisc::kernels
