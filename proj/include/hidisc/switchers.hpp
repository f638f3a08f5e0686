#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hidisc/signed_graph.hpp"

namespace hidisc {

/// 4-cycle v1-v2-v3-v4-v1. Canonical when v1 is the minimum vertex and v2 < v4.
/// psi1 = {v1v2, v3v4}, psi2 = {v2v3, v4v1}.
struct FourCycle {
  std::array<Vertex, 4> v{};

  static FourCycle canonical(Vertex a, Vertex b, Vertex c, Vertex d);
  bool is_canonical() const noexcept;
  std::array<Edge, 2> psi1() const { return {make_edge(v[0], v[1]), make_edge(v[2], v[3])}; }
  std::array<Edge, 2> psi2() const { return {make_edge(v[1], v[2]), make_edge(v[3], v[0])}; }
  /// Edges in cycle order v1v2, v2v3, v3v4, v4v1.
  std::array<Edge, 4> edges() const;

  friend auto operator<=>(const FourCycle&, const FourCycle&) = default;
};

struct Classification {
  int type = 1;  // 1..6
  bool is_switcher = false;
};

/// Type from the sign pattern around the cycle, in cycle order.
Classification classify_signs(std::array<int, 4> signs);
/// Throws InvalidArgument on a non-canonical or degenerate cycle.
Classification classify_four_cycle(const SignedCompleteGraph& g, const FourCycle& cycle);

enum class CensusMode { Exact, Sampled };
/// Exact-census route: per-pair codegree aggregation (SIMD kernels) or
/// direct enumeration of every canonical 4-cycle.
enum class ExactMethod { Codegree, Enumerate };

struct CensusOptions {
  CensusMode mode = CensusMode::Exact;
  ExactMethod method = ExactMethod::Codegree;
  std::uint64_t samples = 10'000;
  Seed seed = 0;
};

struct SwitcherCensus {
  CensusMode mode = CensusMode::Exact;
  std::array<double, 7> counts_by_type{};  // index 1..6; estimates in sampled mode
  std::uint64_t total_c4 = 0;
  double switcher_count = 0;
  double ci_halfwidth = 0;   // 95% normal approximation, sampled mode only
  std::uint64_t samples = 0;
  Seed seed = 0;
};

/// 3 * C(v, 4).
std::uint64_t total_four_cycles(Vertex num_vertices);

SwitcherCensus count_switchers(const SignedCompleteGraph& g, const CensusOptions& options = {});

/// Even alternating cycle of m1 u m2: vertices[0] is the component minimum and
/// vertices[0]vertices[1] is an m1 edge.
struct AlternatingCycle {
  std::vector<Vertex> vertices;
  bool is_four_cycle() const noexcept { return vertices.size() == 4; }
  FourCycle as_four_cycle() const;
};

/// Components of the union of two disjoint perfect matchings, ordered by
/// minimum vertex. Throws Overlap on a shared edge, InvalidArgument otherwise.
std::vector<AlternatingCycle> alternating_components(const Matching& m1, const Matching& m2,
                                                     Vertex num_vertices);

struct DrcThresholds {
  double degree_threshold = 1.89;      // multiple of n for the N1/N2 census
  double good_pair_threshold = 0.05;   // |N+(x) & N-(y)| >= this * n
  double min_degree_target = 0.05;     // peel until min good-pair degree >= this * n

  static DrcThresholds paper();
  static DrcThresholds desk();
};

struct DrcWitness {
  Vertex center = 0;
  std::uint64_t good_pairs = 0;  // in N+(center) x N-(center)
  std::vector<Vertex> x;          // subset of N+(center)
  std::vector<Vertex> y;          // subset of N-(center)
  std::uint32_t min_degree = 0;   // min good-pair degree inside X u Y after peeling
  DrcThresholds thresholds;
  std::uint32_t n1 = 0;           // degree census at thresholds.degree_threshold
  std::uint32_t n2 = 0;
};

std::optional<DrcWitness> drc_witness(const SignedCompleteGraph& g,
                                      const DrcThresholds& thresholds = DrcThresholds::desk());

struct DegreeCensus {
  std::uint32_t n1 = 0;  // #{v : d+(v) >= threshold * n}
  std::uint32_t n2 = 0;  // #{v : d-(v) >= threshold * n}
};

DegreeCensus degree_census(const SignedCompleteGraph& g, double threshold_fraction);

}  // namespace hidisc
