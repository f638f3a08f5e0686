#include <bit>
#include <utility>

#include "hidisc/kernels.hpp"
#include "kernels_internal.hpp"

namespace hidisc::kernels {
namespace scalar {

std::int64_t sign_total(const std::int8_t* signs, std::size_t count) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < count; ++i) sum += signs[i];
  return sum;
}

std::int64_t permuted_pair_sum(const std::int8_t* signs, const std::uint32_t* us,
                               const std::uint32_t* vs, std::size_t count,
                               const std::uint32_t* perm) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t a = perm[us[i]];
    std::uint64_t b = perm[vs[i]];
    if (a < b) std::swap(a, b);
    sum += signs[a * (a - 1) / 2 + b];
  }
  return sum;
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

Codegrees codegrees(const std::uint64_t* pos_x, const std::uint64_t* neg_x,
                    const std::uint64_t* pos_y, const std::uint64_t* neg_y, std::size_t words) {
  Codegrees c;
  for (std::size_t i = 0; i < words; ++i) {
    c.both_plus += std::popcount(pos_x[i] & pos_y[i]);
    c.both_minus += std::popcount(neg_x[i] & neg_y[i]);
    c.plus_minus += std::popcount(pos_x[i] & neg_y[i]);
    c.minus_plus += std::popcount(neg_x[i] & pos_y[i]);
  }
  return c;
}

}  // namespace scalar

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{Isa::Scalar,          "scalar",
                                 &scalar::sign_total,  &scalar::permuted_pair_sum,
                                 &scalar::and_popcount, &scalar::codegrees};
  return table;
}

}  // namespace hidisc::kernels
