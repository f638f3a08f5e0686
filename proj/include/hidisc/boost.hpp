#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hidisc/signed_graph.hpp"
#include "hidisc/switchers.hpp"

namespace hidisc {

struct SwapRecord {
  FourCycle cycle;
  std::int64_t before_first = 0;
  std::int64_t before_second = 0;
  std::int64_t after_first = 0;
  std::int64_t after_second = 0;
  int stage = 0;  // 0 for pair boosts, 1..3 for triple stages
  // Positions of the two matchings in the outcome's matching list.
  int first = 0;
  int second = 1;
};

using SwapLog = std::vector<SwapRecord>;

enum class BoostMode { Paper, Minimal };
enum class BoostStatus { Met, BestEffort };

struct BoostOutcome {
  std::vector<Matching> matchings;
  std::vector<Rational> achieved;  // |disc(m) - center| per matching
  double target = 0;
  BoostStatus status = BoostStatus::Met;
  std::string reason;              // empty when met
  SwapLog log;
  std::size_t components = 0;      // alternating components examined (last stage run)
  std::size_t switchers = 0;       // of which switchers
};

/// Exchanges the two halves of q between m1 and m2. Throws NotAComponent
/// unless q has two edges in each matching.
std::pair<Matching, Matching> swap_switcher(const Matching& m1, const Matching& m2,
                                            const FourCycle& q);

/// Pushes both matchings' signed discrepancy at least `target` away from
/// `center` by swapping switcher components of m1 u m2. With center 0 this is
/// the plain discrepancy boost.
BoostOutcome boost_pair(const SignedCompleteGraph& g, const Matching& m1, const Matching& m2,
                        double target, BoostMode mode, Rational center = Rational(0));

/// Three sequential stages on psi1/psi2, psi2/psi3, psi3/psi1. Cycles swapped in
/// one stage are kept vertex-disjoint from those of earlier stages.
BoostOutcome boost_triple(const SignedCompleteGraph& g, const Matching& psi1,
                          const Matching& psi2, const Matching& psi3, double primary_target,
                          double final_target, Rational center = Rational(0));

/// |S/n - center| for a perfect matching with n edges.
Rational deviation(std::int64_t sum, std::int64_t n, const Rational& center);

}  // namespace hidisc
