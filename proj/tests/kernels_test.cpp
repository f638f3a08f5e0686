#include <gtest/gtest.h>

#include <string>

#include "hidisc/kernels.hpp"
#include "hidisc/rng.hpp"

using namespace hidisc;
using namespace hidisc::kernels;

namespace {

const KernelTable* simd_or_skip() { return avx2_table(); }

std::vector<std::int8_t> random_signs(std::size_t n, Rng& rng) {
  std::vector<std::int8_t> s(n + 3, 0);
  for (std::size_t i = 0; i < n; ++i) s[i] = rng.below(2) ? 1 : -1;
  return s;
}

}  // namespace

TEST(Kernels, ActiveTableIsKnown) {
  const auto& a = active();
  EXPECT_TRUE(&a == &scalar_table() || &a == avx2_table());
  EXPECT_STREQ(isa_name(Isa::Scalar), "scalar");
}

TEST(Kernels, SignTotalMatchesScalar) {
  const auto* simd = simd_or_skip();
  if (!simd) GTEST_SKIP() << "no AVX2 on this CPU";
  Rng rng(1);
  for (std::size_t n : {0u, 1u, 31u, 32u, 33u, 255u, 1000u, 19900u}) {
    const auto s = random_signs(n, rng);
    EXPECT_EQ(simd->sign_total(s.data(), n), scalar_table().sign_total(s.data(), n)) << n;
  }
}

TEST(Kernels, PermutedPairSumMatchesScalar) {
  const auto* simd = simd_or_skip();
  if (!simd) GTEST_SKIP() << "no AVX2 on this CPU";
  Rng rng(2);
  for (std::uint32_t nv : {2u, 5u, 16u, 101u, 600u}) {
    const auto signs = random_signs(static_cast<std::size_t>(nv) * (nv - 1) / 2, rng);
    std::vector<std::uint32_t> perm(nv);
    for (std::uint32_t i = 0; i < nv; ++i) perm[i] = i;
    rng.shuffle(perm);
    for (std::size_t count : {0u, 1u, 7u, 8u, 9u, 64u, 333u}) {
      std::vector<std::uint32_t> us, vs;
      for (std::size_t i = 0; i < count; ++i) {
        const auto u = static_cast<std::uint32_t>(rng.below(nv));
        auto v = static_cast<std::uint32_t>(rng.below(nv));
        if (v == u) v = (u + 1) % nv;
        us.push_back(u);
        vs.push_back(v);
      }
      EXPECT_EQ(simd->permuted_pair_sum(signs.data(), us.data(), vs.data(), count, perm.data()),
                scalar_table().permuted_pair_sum(signs.data(), us.data(), vs.data(), count,
                                                 perm.data()))
          << nv << " " << count;
    }
  }
}

TEST(Kernels, PopcountAndCodegreesMatchScalar) {
  const auto* simd = simd_or_skip();
  if (!simd) GTEST_SKIP() << "no AVX2 on this CPU";
  Rng rng(3);
  for (std::size_t words : {1u, 3u, 4u, 5u, 8u, 13u}) {
    std::vector<std::uint64_t> a(words), b(words), c(words), d(words);
    for (std::size_t i = 0; i < words; ++i) {
      a[i] = rng.next();
      b[i] = rng.next();
      c[i] = rng.next() & ~a[i];
      d[i] = rng.next() & ~b[i];
    }
    EXPECT_EQ(simd->and_popcount(a.data(), b.data(), words),
              scalar_table().and_popcount(a.data(), b.data(), words));
    const auto x = simd->codegrees(a.data(), c.data(), b.data(), d.data(), words);
    const auto y = scalar_table().codegrees(a.data(), c.data(), b.data(), d.data(), words);
    EXPECT_EQ(x.both_plus, y.both_plus);
    EXPECT_EQ(x.both_minus, y.both_minus);
    EXPECT_EQ(x.plus_minus, y.plus_minus);
    EXPECT_EQ(x.minus_plus, y.minus_plus);
  }
}

TEST(Kernels, ScalarPermutedPairSumByHand) {
  // K4 edges in index order: 01 02 12 03 13 23.
  const std::vector<std::int8_t> signs{1, -1, 1, 1, -1, -1, 0, 0, 0};
  const std::vector<std::uint32_t> us{0, 2}, vs{1, 3}, perm{0, 1, 2, 3}, swap01{1, 0, 3, 2};
  EXPECT_EQ(scalar_table().permuted_pair_sum(signs.data(), us.data(), vs.data(), 2, perm.data()),
            0);
  EXPECT_EQ(scalar_table().permuted_pair_sum(signs.data(), us.data(), vs.data(), 2, swap01.data()),
            0);
  const std::vector<std::uint32_t> rot{1, 2, 3, 0};
  // {01, 23} -> {12, 30}: +1 + 1
  EXPECT_EQ(scalar_table().permuted_pair_sum(signs.data(), us.data(), vs.data(), 2, rot.data()), 2);
}
