#pragma once

#include "hidisc/kernels.hpp"

namespace hidisc::kernels {

namespace scalar {
std::int64_t permuted_pair_sum(const std::int8_t* signs, const std::uint32_t* us,
                               const std::uint32_t* vs, std::size_t count,
                               const std::uint32_t* perm);
}  // namespace scalar

#if defined(HIDISC_HAVE_AVX2)
const KernelTable& avx2_table_unchecked() noexcept;
#endif

// Largest vertex id whose edge index still fits the signed 32-bit gather offset.
inline constexpr std::uint32_t kGatherVertexLimit = 46340;

}  // namespace hidisc::kernels
