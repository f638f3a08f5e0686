// Compiled with -mavx2; only reached after the CPUID check in dispatch.cpp.

#include <immintrin.h>

#include <bit>

#include "hidisc/kernels.hpp"
#include "kernels_internal.hpp"

namespace hidisc::kernels {
namespace avx2 {
namespace {

// Per-byte popcount via nibble lookup, folded into four 64-bit lane sums.
inline __m256i popcount_lanes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i bytes =
      _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum_u64(__m256i v) {
  const __m128i s = _mm_add_epi64(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(s)) +
         static_cast<std::uint64_t>(_mm_extract_epi64(s, 1));
}

inline __m256i load(const std::uint64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// Four edge indices hi*(hi-1)/2 + lo from 32-bit hi/lo lanes.
inline __m256i edge_indices(__m128i hi32, __m128i lo32) {
  const __m256i hi = _mm256_cvtepu32_epi64(hi32);
  const __m256i lo = _mm256_cvtepu32_epi64(lo32);
  const __m256i prod = _mm256_mul_epu32(hi, _mm256_sub_epi64(hi, _mm256_set1_epi64x(1)));
  return _mm256_add_epi64(_mm256_srli_epi64(prod, 1), lo);
}

inline __m128i gather_signs(const std::int8_t* signs, __m256i idx) {
  const __m128i raw =
      _mm256_i64gather_epi32(reinterpret_cast<const int*>(signs), idx, 1);
  return _mm_srai_epi32(_mm_slli_epi32(raw, 24), 24);
}

}  // namespace

std::int64_t sign_total(const std::int8_t* signs, std::size_t count) {
  const __m256i bias = _mm256_set1_epi8(static_cast<char>(0x80));
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= count; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(signs + i));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(_mm256_xor_si256(v, bias),
                                                _mm256_setzero_si256()));
  }
  std::int64_t sum = static_cast<std::int64_t>(horizontal_sum_u64(acc)) -
                     128 * static_cast<std::int64_t>(i);
  for (; i < count; ++i) sum += signs[i];
  return sum;
}

std::int64_t permuted_pair_sum(const std::int8_t* signs, const std::uint32_t* us,
                               const std::uint32_t* vs, std::size_t count,
                               const std::uint32_t* perm) {
  const int* perm_i = reinterpret_cast<const int*>(perm);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    const __m256i u = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(us + i));
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(vs + i));
    const __m256i a = _mm256_i32gather_epi32(perm_i, u, 4);
    const __m256i b = _mm256_i32gather_epi32(perm_i, v, 4);
    const __m256i hi = _mm256_max_epu32(a, b);
    const __m256i lo = _mm256_min_epu32(a, b);
    const __m128i s0 = gather_signs(
        signs, edge_indices(_mm256_castsi256_si128(hi), _mm256_castsi256_si128(lo)));
    const __m128i s1 = gather_signs(signs, edge_indices(_mm256_extracti128_si256(hi, 1),
                                                        _mm256_extracti128_si256(lo, 1)));
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(s0));
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(s1));
  }
  std::int64_t sum = static_cast<std::int64_t>(horizontal_sum_u64(acc));
  return sum + scalar::permuted_pair_sum(signs, us + i, vs + i, count - i, perm);
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_and_si256(load(a + i), load(b + i))));
  }
  std::uint64_t total = horizontal_sum_u64(acc);
  for (; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

Codegrees codegrees(const std::uint64_t* pos_x, const std::uint64_t* neg_x,
                    const std::uint64_t* pos_y, const std::uint64_t* neg_y, std::size_t words) {
  __m256i pp = _mm256_setzero_si256();
  __m256i nn = _mm256_setzero_si256();
  __m256i pn = _mm256_setzero_si256();
  __m256i np = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i px = load(pos_x + i);
    const __m256i nx = load(neg_x + i);
    const __m256i py = load(pos_y + i);
    const __m256i ny = load(neg_y + i);
    pp = _mm256_add_epi64(pp, popcount_lanes(_mm256_and_si256(px, py)));
    nn = _mm256_add_epi64(nn, popcount_lanes(_mm256_and_si256(nx, ny)));
    pn = _mm256_add_epi64(pn, popcount_lanes(_mm256_and_si256(px, ny)));
    np = _mm256_add_epi64(np, popcount_lanes(_mm256_and_si256(nx, py)));
  }
  Codegrees c{horizontal_sum_u64(pp), horizontal_sum_u64(nn), horizontal_sum_u64(pn),
              horizontal_sum_u64(np)};
  for (; i < words; ++i) {
    c.both_plus += std::popcount(pos_x[i] & pos_y[i]);
    c.both_minus += std::popcount(neg_x[i] & neg_y[i]);
    c.plus_minus += std::popcount(pos_x[i] & neg_y[i]);
    c.minus_plus += std::popcount(neg_x[i] & pos_y[i]);
  }
  return c;
}

}  // namespace avx2

const KernelTable& avx2_table_unchecked() noexcept {
  static const KernelTable table{Isa::Avx2,          "avx2",
                                 &avx2::sign_total,  &avx2::permuted_pair_sum,
                                 &avx2::and_popcount, &avx2::codegrees};
  return table;
}

}  // namespace hidisc::kernels
