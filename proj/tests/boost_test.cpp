#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <optional>
#include <tuple>
#include <set>

#include "helpers.hpp"
#include "hidisc/balancer.hpp"
#include "hidisc/boost.hpp"
#include "hidisc/error.hpp"

using namespace hidisc;
using testing_support::matching;
using testing_support::with_negatives;

namespace {

std::multiset<Edge> union_of(std::span<const Matching> ms) {
  std::multiset<Edge> out;
  for (const auto& m : ms) out.insert(m.edges().begin(), m.edges().end());
  return out;
}

struct Pair {
  SignedCompleteGraph g;
  Matching a, b;
};

// Two disjoint perfect matchings taken from a relabelled round robin.
Pair random_pair(Vertex nv, double p, Seed seed) {
  auto g = testing_support::random_graph(nv, p, seed);
  const auto rr = round_robin(nv);
  const auto pi = random_permutation(nv, derive_seed(seed, 7));
  Rng rng(seed);
  const auto i = rng.below(rr.matchings.size());
  auto j = rng.below(rr.matchings.size() - 1);
  if (j >= i) ++j;
  return {std::move(g), permute(rr.matchings[i], pi), permute(rr.matchings[j], pi)};
}

struct Triple {
  SignedCompleteGraph g;
  Matching m[3];
};

// Blocks of four vertices; psi_i takes the i-th matching of every block.
Triple random_k4_factor(Vertex nv, double p, Seed seed) {
  auto g = testing_support::random_graph(nv, p, seed);
  const auto pi = random_permutation(nv, derive_seed(seed, 3));
  std::vector<Edge> e[3];
  for (Vertex b = 0; b < nv; b += 4) {
    const Vertex v0 = pi[b], v1 = pi[b + 1], v2 = pi[b + 2], v3 = pi[b + 3];
    e[0].push_back(make_edge(v0, v1));
    e[0].push_back(make_edge(v2, v3));
    e[1].push_back(make_edge(v0, v2));
    e[1].push_back(make_edge(v1, v3));
    e[2].push_back(make_edge(v0, v3));
    e[2].push_back(make_edge(v1, v2));
  }
  return {std::move(g), {Matching(e[0]), Matching(e[1]), Matching(e[2])}};
}

struct Cand {
  std::int64_t in_a, in_b;
  std::int64_t delta() const { return in_a - in_b; }
};

// Switcher components of a u b split into (J1, J2), canonical order.
std::pair<std::vector<Cand>, std::vector<Cand>> split(const SignedCompleteGraph& g,
                                                      const Matching& a, const Matching& b) {
  std::vector<Cand> j1, j2;
  for (const auto& c : alternating_components(a, b, g.num_vertices())) {
    if (!c.is_four_cycle()) continue;
    const auto& v = c.vertices;
    const Cand x{g.sign(v[0], v[1]) + g.sign(v[2], v[3]), g.sign(v[1], v[2]) + g.sign(v[3], v[0])};
    if (x.in_a > x.in_b) j1.push_back(x);
    else if (x.in_a < x.in_b) j2.push_back(x);
  }
  return {j1, j2};
}

Rational absdisc(std::int64_t s, std::int64_t n) { return Rational(s, n).abs(); }

}  // namespace

TEST(Swap, FullExchangeOnK4) {
  const auto m1 = matching({{0, 1}, {2, 3}}), m2 = matching({{0, 2}, {1, 3}});
  const auto q = FourCycle::canonical(0, 1, 3, 2);
  auto [a, b] = swap_switcher(m1, m2, q);
  EXPECT_EQ(a, m2);
  EXPECT_EQ(b, m1);
  auto [c, d] = swap_switcher(a, b, q);
  EXPECT_EQ(c, m1);
  EXPECT_EQ(d, m2);

  const auto g = with_negatives(4, {{0, 2}, {1, 3}});
  EXPECT_EQ(signed_sum(g, m1), 2);
  EXPECT_EQ(signed_sum(g, m2), -2);
  EXPECT_EQ(signed_sum(g, a), -2);
  EXPECT_EQ(signed_sum(g, b), 2);
}

TEST(Swap, InvolutionOnRandomPairs) {
  for (Seed s = 0; s < 30; ++s) {
    const auto p = random_pair(16, 0.5, s);
    for (const auto& c : alternating_components(p.a, p.b, 16)) {
      if (!c.is_four_cycle()) continue;
      const auto q = c.as_four_cycle();
      auto [x, y] = swap_switcher(p.a, p.b, q);
      EXPECT_TRUE(x.is_perfect(16));
      EXPECT_TRUE(y.is_perfect(16));
      EXPECT_EQ(signed_sum(p.g, x) + signed_sum(p.g, y),
                signed_sum(p.g, p.a) + signed_sum(p.g, p.b));
      auto [u, v] = swap_switcher(x, y, q);
      EXPECT_EQ(u, p.a);
      EXPECT_EQ(v, p.b);
    }
  }
}

TEST(Swap, RejectsNonComponent) {
  const auto m1 = matching({{0, 1}, {2, 3}, {4, 5}}), m2 = matching({{1, 2}, {3, 4}, {5, 0}});
  try {
    swap_switcher(m1, m2, FourCycle::canonical(0, 1, 2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAComponent);
  }
}

TEST(BoostPair, NoSwitchers) {
  const auto g = SignedCompleteGraph::all_plus(8);
  // Two components on 8 vertices, all +, with target above 1 so the early exit is skipped.
  const auto m1 = matching({{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  const auto m2 = matching({{0, 3}, {1, 2}, {4, 7}, {5, 6}});
  const auto r = boost_pair(g, m1, m2, 1.5, BoostMode::Paper);
  EXPECT_EQ(r.status, BoostStatus::BestEffort);
  EXPECT_EQ(r.reason, "no switchers");
  EXPECT_EQ(r.matchings[0], m1);
  EXPECT_EQ(r.matchings[1], m2);
  EXPECT_TRUE(r.log.empty());
}

TEST(BoostPair, AlreadyMetIsUnchanged) {
  // Both components Type 4 with m1 holding the + edges: S = 4 / -4.
  const auto m1 = matching({{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  const auto m2 = matching({{0, 3}, {1, 2}, {4, 7}, {5, 6}});
  const auto g = with_negatives(8, {{0, 3}, {1, 2}, {4, 7}, {5, 6}});
  EXPECT_EQ(signed_sum(g, m1), 4);
  EXPECT_EQ(signed_sum(g, m2), -4);
  for (auto mode : {BoostMode::Paper, BoostMode::Minimal}) {
    const auto r = boost_pair(g, m1, m2, 0.9, mode);
    EXPECT_EQ(r.status, BoostStatus::Met);
    EXPECT_TRUE(r.log.empty());
    EXPECT_EQ(r.matchings[0], m1);
    EXPECT_EQ(r.switchers, 2u);
  }
}

TEST(BoostPair, TiedSidesPickFirst) {
  // Component {0..3} favours m1, component {4..7} favours m2: S = 0 / 0.
  const auto m1 = matching({{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  const auto m2 = matching({{0, 3}, {1, 2}, {4, 7}, {5, 6}});
  const auto g = with_negatives(8, {{0, 3}, {1, 2}, {4, 5}, {6, 7}});
  ASSERT_EQ(signed_sum(g, m1), 0);

  const auto paper = boost_pair(g, m1, m2, 0.9, BoostMode::Paper);
  EXPECT_EQ(paper.status, BoostStatus::Met);
  ASSERT_EQ(paper.log.size(), 1u);
  EXPECT_EQ(paper.log[0].cycle, FourCycle::canonical(0, 1, 2, 3));
  EXPECT_EQ(signed_sum(g, paper.matchings[0]), -4);
  EXPECT_EQ(signed_sum(g, paper.matchings[1]), 4);
  EXPECT_EQ(paper.achieved[0], Rational(1));

  const auto minimal = boost_pair(g, m1, m2, 0.1, BoostMode::Minimal);
  EXPECT_EQ(minimal.status, BoostStatus::Met);
  EXPECT_EQ(minimal.log.size(), 1u);
}

TEST(BoostPair, MinimalModeOverEveryCycleSigning) {
  // Three 4-cycle components on 12 vertices; every signing of the 12 cycle
  // edges, every target. The swap count must equal the shortest gain-ordered
  // prefix of the chosen side, recomputed here.
  const auto m1 = matching({{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}});
  const auto m2 = matching({{0, 3}, {1, 2}, {4, 7}, {5, 6}, {8, 11}, {9, 10}});
  std::vector<Edge> cyc(m1.edges().begin(), m1.edges().end());
  cyc.insert(cyc.end(), m2.edges().begin(), m2.edges().end());
  int needed_two = 0;
  for (std::uint32_t mask = 0; mask < (1u << cyc.size()); ++mask) {
    std::vector<Edge> neg;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      if (mask >> i & 1u) neg.push_back(cyc[i]);
    }
    const auto g = generate_signing(12, signing::FromEdgeList{neg}, 0);
    const auto s1 = signed_sum(g, m1), s2 = signed_sum(g, m2);
    auto [j1, j2] = split(g, m1, m2);
    auto by_gain = [](std::vector<Cand>& v) {
      std::stable_sort(v.begin(), v.end(), [](const Cand& x, const Cand& y) {
        return std::abs(x.delta()) > std::abs(y.delta());
      });
    };
    by_gain(j1);
    by_gain(j2);
    const auto& side = j1.size() >= j2.size() ? j1 : j2;
    const auto& other = j1.size() >= j2.size() ? j2 : j1;
    for (double target : {1.0 / 3, 2.0 / 3, 1.0}) {
      const auto ok = [&](std::int64_t a, std::int64_t b) {
        return at_least(absdisc(a, 6), target) && at_least(absdisc(b, 6), target);
      };
      const auto r = boost_pair(g, m1, m2, target, BoostMode::Minimal);
      if (ok(s1, s2)) {
        EXPECT_TRUE(r.log.empty());
        continue;
      }
      std::optional<std::size_t> want;
      for (const auto* list : {&side, &other}) {
        std::int64_t a = s1, b = s2;
        for (std::size_t k = 0; k < list->size() && !want; ++k) {
          a -= (*list)[k].delta();
          b += (*list)[k].delta();
          if (ok(a, b)) want = k + 1;
        }
        if (want) break;
      }
      if (want) {
        EXPECT_EQ(r.status, BoostStatus::Met) << mask;
        EXPECT_EQ(r.log.size(), *want) << mask;
        needed_two += *want >= 2;
      } else {
        EXPECT_EQ(r.status, BoostStatus::BestEffort) << mask;
      }
    }
  }
  EXPECT_GT(needed_two, 0);
}

TEST(BoostPair, PropertiesOnRandomInstances) {
  int met = 0;
  for (Vertex nv : {8u, 12u, 16u}) {
    for (Seed s = 0; s < 150; ++s) {
      const auto p = random_pair(nv, 0.3 + 0.002 * static_cast<double>(s), s);
      const std::int64_t n = nv / 2;
      const auto s1 = signed_sum(p.g, p.a), s2 = signed_sum(p.g, p.b);
      for (auto mode : {BoostMode::Paper, BoostMode::Minimal}) {
        const double target = 0.25 + 0.25 * static_cast<double>(s % 3);
        const auto r = boost_pair(p.g, p.a, p.b, target, mode);
        ASSERT_EQ(r.matchings.size(), 2u);
        EXPECT_TRUE(r.matchings[0].is_perfect(nv));
        EXPECT_TRUE(r.matchings[1].is_perfect(nv));
        const std::vector<Matching> in{p.a, p.b};
        EXPECT_EQ(union_of(r.matchings), union_of(in));
        const auto t1 = signed_sum(p.g, r.matchings[0]), t2 = signed_sum(p.g, r.matchings[1]);
        EXPECT_EQ(t1 + t2, s1 + s2);
        EXPECT_EQ(r.achieved[0], absdisc(t1, n));
        EXPECT_EQ(r.achieved[1], absdisc(t2, n));
        std::int64_t moved = 0;
        bool one_sided = true;
        for (const auto& rec : r.log) {
          EXPECT_EQ(rec.after_first + rec.after_second, rec.before_first + rec.before_second);
          const auto d = std::abs(rec.after_first - rec.before_first);
          EXPECT_TRUE(d == 2 || d == 4);
          moved += rec.before_first - rec.after_first;
          one_sided = one_sided && rec.after_first < rec.before_first;
        }
        EXPECT_EQ(s1 - moved, t1);
        const auto swapped = static_cast<std::int64_t>(r.log.size());
        if (one_sided && 2 * swapped >= std::abs(s1)) {
          EXPECT_GE(std::abs(t1), 2 * swapped - std::abs(s1));
        }
        const bool ok = at_least(r.achieved[0], target) && at_least(r.achieved[1], target);
        EXPECT_EQ(ok, r.status == BoostStatus::Met);
        if (ok) {
          ++met;
          const auto again = boost_pair(p.g, r.matchings[0], r.matchings[1], target, mode);
          EXPECT_TRUE(again.log.empty());
          EXPECT_EQ(again.matchings, r.matchings);
        } else {
          EXPECT_FALSE(r.reason.empty());
        }
        const auto repeat = boost_pair(p.g, p.a, p.b, target, mode);
        EXPECT_EQ(repeat.matchings, r.matchings);
        EXPECT_EQ(repeat.log.size(), r.log.size());
      }
    }
  }
  EXPECT_GT(met, 0);
}

TEST(BoostPair, PaperModeSwapsWholeSide) {
  for (Seed s = 0; s < 60; ++s) {
    const auto p = random_pair(16, 0.5, s);
    const auto s1 = signed_sum(p.g, p.a), s2 = signed_sum(p.g, p.b);
    const auto r = boost_pair(p.g, p.a, p.b, 0.75, BoostMode::Paper);
    const auto [j1, j2] = split(p.g, p.a, p.b);
    const bool early = at_least(absdisc(s1, 8), 0.75) && at_least(absdisc(s2, 8), 0.75);
    if (early || (j1.empty() && j2.empty())) {
      EXPECT_TRUE(r.log.empty());
    } else {
      EXPECT_EQ(r.log.size(), std::max(j1.size(), j2.size()));
    }
  }
}

TEST(BoostPair, RejectsOverlap) {
  const auto m = matching({{0, 1}, {2, 3}});
  EXPECT_THROW(boost_pair(SignedCompleteGraph::all_plus(4), m, m, 0.5, BoostMode::Paper), Error);
}

TEST(BoostPair, CenteredDeviation) {
  // Around center 1/2, an all-+ pair sits at deviation 1/2.
  const auto g = SignedCompleteGraph::all_plus(8);
  const auto m1 = matching({{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  const auto m2 = matching({{0, 3}, {1, 2}, {4, 7}, {5, 6}});
  const auto r = boost_pair(g, m1, m2, 0.5, BoostMode::Minimal, Rational(1, 2));
  EXPECT_EQ(r.status, BoostStatus::Met);
  EXPECT_EQ(r.achieved[0], Rational(1, 2));
  EXPECT_EQ(deviation(-2, 4, Rational(1, 4)), Rational(3, 4));
}

TEST(BoostTriple, AllPlusK4Factor) {
  const auto g = SignedCompleteGraph::all_plus(8);
  const auto t = random_k4_factor(8, 1.0, 1);
  const auto r = boost_triple(g, t.m[0], t.m[1], t.m[2], 0.5, 0.25);
  EXPECT_EQ(r.status, BoostStatus::Met);
  EXPECT_TRUE(r.log.empty());
  for (const auto& a : r.achieved) EXPECT_EQ(a, Rational(1));
}

TEST(BoostTriple, UnreachableNamesStage) {
  const auto g = SignedCompleteGraph::all_plus(8);
  const auto t = random_k4_factor(8, 1.0, 1);
  const auto r = boost_triple(g, t.m[0], t.m[1], t.m[2], 1.5, 1.2);
  EXPECT_EQ(r.status, BoostStatus::BestEffort);
  EXPECT_NE(r.reason.find("stage 1"), std::string::npos) << r.reason;
  EXPECT_THROW(boost_triple(g, t.m[0], t.m[1], t.m[2], 0.1, 0.2), Error);
  EXPECT_THROW(boost_triple(g, t.m[0], t.m[0], t.m[2], 0.5, 0.2), Error);
}

TEST(BoostTriple, MixedThirdMatchingAgainstExhaustiveStages) {
  // psi1 all +, psi2 all -, psi3 two + (block 0) and two - (block 1).
  const auto psi1 = matching({{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  const auto psi2 = matching({{0, 2}, {1, 3}, {4, 6}, {5, 7}});
  const auto psi3 = matching({{0, 3}, {1, 2}, {4, 7}, {5, 6}});
  const auto g = with_negatives(8, {{0, 2}, {1, 3}, {4, 6}, {5, 7}, {4, 7}, {5, 6}});
  ASSERT_EQ(signed_sum(g, psi1), 4);
  ASSERT_EQ(signed_sum(g, psi2), -4);
  ASSERT_EQ(signed_sum(g, psi3), 0);
  const double primary = 0.5, fin = 0.25;
  const auto r = boost_triple(g, psi1, psi2, psi3, primary, fin);

  // Stages 1 and 2 have nothing to do. Stage 3 works on psi3 u psi1: try every
  // subset of its switcher components.
  std::vector<FourCycle> sw;
  for (const auto& c : alternating_components(psi3, psi1, 8)) {
    if (c.is_four_cycle() && classify_four_cycle(g, c.as_four_cycle()).is_switcher) {
      sw.push_back(c.as_four_cycle());
    }
  }
  ASSERT_EQ(sw.size(), 1u);
  std::optional<std::size_t> fewest;
  Rational best_min(0);
  for (std::uint32_t mask = 0; mask < (1u << sw.size()); ++mask) {
    Matching a = psi3, b = psi1;
    for (std::size_t i = 0; i < sw.size(); ++i) {
      if (mask >> i & 1u) std::tie(a, b) = swap_switcher(a, b, sw[i]);
    }
    const auto lo = std::min(discrepancy(g, a).absolute, discrepancy(g, b).absolute);
    best_min = std::max(best_min, lo);
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (at_least(lo, fin) && (!fewest || k < *fewest)) fewest = k;
  }
  EXPECT_FALSE(fewest.has_value());
  EXPECT_EQ(r.status, BoostStatus::BestEffort);
  EXPECT_NE(r.reason.find("stage 3"), std::string::npos) << r.reason;
  EXPECT_EQ(std::min(r.achieved[0], r.achieved[2]), best_min);
  const std::vector<Matching> in{psi1, psi2, psi3};
  EXPECT_EQ(union_of(r.matchings), union_of(in));
}

TEST(BoostTriple, StageOneIsMinimalAndStagesStayDisjoint) {
  int checked = 0;
  for (Vertex nv : {8u, 12u, 16u, 24u}) {
    for (Seed s = 0; s < 80; ++s) {
      const auto t = random_k4_factor(nv, 0.5, s + 1000 * nv);
      const std::int64_t n = nv / 2;
      const double primary = 0.5, fin = 0.25;
      const auto r = boost_triple(t.g, t.m[0], t.m[1], t.m[2], primary, fin);
      const std::vector<Matching> in{t.m[0], t.m[1], t.m[2]};
      EXPECT_EQ(union_of(r.matchings), union_of(in));
      for (const auto& m : r.matchings) EXPECT_TRUE(m.is_perfect(nv));

      std::set<Vertex> used;
      int last_stage = 0;
      std::size_t stage1 = 0;
      for (const auto& rec : r.log) {
        EXPECT_GE(rec.stage, last_stage);
        last_stage = rec.stage;
        stage1 += rec.stage == 1;
        EXPECT_EQ(rec.after_first + rec.after_second, rec.before_first + rec.before_second);
        for (Vertex v : rec.cycle.v) EXPECT_TRUE(used.insert(v).second);
      }
      const bool met = std::all_of(r.achieved.begin(), r.achieved.end(),
                                   [&](const Rational& x) { return at_least(x, fin); });
      EXPECT_EQ(met, r.status == BoostStatus::Met);

      // Exhaustive stage-1 oracle on the larger side.
      const auto s1 = signed_sum(t.g, t.m[0]);
      if (at_least(absdisc(s1, n), primary)) {
        EXPECT_EQ(stage1, 0u);
        continue;
      }
      const auto [j1, j2] = split(t.g, t.m[0], t.m[1]);
      const auto& side = j1.size() >= j2.size() ? j1 : j2;
      if (side.size() > 12) continue;
      std::optional<std::size_t> fewest;
      for (std::uint32_t mask = 1; mask < (1u << side.size()); ++mask) {
        std::int64_t shift = 0;
        for (std::size_t i = 0; i < side.size(); ++i) {
          if (mask >> i & 1u) shift += side[i].delta();
        }
        const auto k = static_cast<std::size_t>(std::popcount(mask));
        if (at_least(absdisc(s1 - shift, n), primary) && (!fewest || k < *fewest)) fewest = k;
      }
      if (fewest) {
        EXPECT_EQ(stage1, *fewest) << nv << " seed " << s;
        ++checked;
      } else {
        EXPECT_EQ(stage1, side.size());
      }
    }
  }
  EXPECT_GT(checked, 20);
}
