#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64 builds, an AVX2 version; the active table is chosen once at
// runtime from CPUID. Setting HIDISC_SIMD=scalar forces the reference path.

namespace hidisc::kernels {

enum class Isa { Scalar, Avx2 };

struct Codegrees {
  std::uint64_t both_plus = 0;    // |N+(x) & N+(y)|
  std::uint64_t both_minus = 0;   // |N-(x) & N-(y)|
  std::uint64_t plus_minus = 0;   // |N+(x) & N-(y)|
  std::uint64_t minus_plus = 0;   // |N-(x) & N+(y)|
};

struct KernelTable {
  Isa isa;
  const char* name;

  /// Sum of count int8 values.
  std::int64_t (*sign_total)(const std::int8_t* signs, std::size_t count);

  /// sum_i signs[edge_index(perm[us[i]], perm[vs[i]])]. The signs buffer must
  /// stay readable three bytes past the largest index.
  std::int64_t (*permuted_pair_sum)(const std::int8_t* signs, const std::uint32_t* us,
                                    const std::uint32_t* vs, std::size_t count,
                                    const std::uint32_t* perm);

  std::uint64_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words);

  Codegrees (*codegrees)(const std::uint64_t* pos_x, const std::uint64_t* neg_x,
                         const std::uint64_t* pos_y, const std::uint64_t* neg_y,
                         std::size_t words);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when AVX2 was not compiled in or the CPU lacks it.
const KernelTable* avx2_table() noexcept;
/// Table used by the library.
const KernelTable& active() noexcept;

bool cpu_supports_avx2() noexcept;
const char* isa_name(Isa isa) noexcept;

}  // namespace hidisc::kernels
