#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hidisc/balancer.hpp"
#include "hidisc/boost.hpp"
#include "hidisc/factorizations.hpp"
#include "hidisc/signed_graph.hpp"

namespace hidisc {

enum class Strategy { C4K4, MatchingPairs, Auto };
enum class Preset { Desk, Paper };
enum class Branch { Balanced, Boosted, BothBest };

std::string_view strategy_name(Strategy s) noexcept;
Strategy parse_strategy(std::string_view name);
std::string_view branch_name(Branch b) noexcept;

struct PipelineConfig {
  double gamma = 0.05;
  double epsilon = 0.02;
  double primary_target = 0.25;
  double final_target = 0.05;
  std::uint64_t max_trials = 200;   // balancer draws per attempt
  std::uint32_t attempts = 8;       // boosted-branch restarts, each with a derived seed
  Seed seed = 0;
  Strategy strategy = Strategy::Auto;
  Preset preset = Preset::Desk;
  BoostMode boost_mode = BoostMode::Minimal;
  DecompositionOptions decomposition;
  // After factor boosting, swap switchers between any two output matchings
  // while that strictly raises (min deviation, -#matchings at the min).
  bool polish = true;

  static PipelineConfig desk();
  static PipelineConfig paper();
  /// Throws InvalidArgument.
  void validate() const;
};

struct MatchingReport {
  std::int64_t sum = 0;
  Rational signed_disc;
  Rational abs_disc;
  Rational deviation;  // |signed_disc - center|
};

struct FactorBoostReport {
  std::size_t factor = 0;
  FactorKind kind = FactorKind::MatchingPair;
  BoostStatus status = BoostStatus::Met;
  std::string reason;
  SwapLog log;
};

struct PipelineResult {
  OneFactorization one_factorization;
  std::vector<MatchingReport> per_matching;
  // Minimum deviation from `center`; with center 0 this is min |disc|.
  Rational min_abs_disc;
  Rational center;
  Rational graph_disc;
  Branch branch = Branch::Boosted;
  Branch selected = Branch::Boosted;  // which branch produced the output
  BoostStatus status = BoostStatus::Met;
  std::string reason;
  std::string construction;
  BalanceOutcome balance;
  std::vector<FactorBoostReport> boosts;
  // Cross-matching switcher swaps applied after the factor boosts.
  SwapLog polish;
  VerificationReport verification;
  Seed seed = 0;
  std::uint32_t attempt = 0;        // attempt index that produced the output
  std::uint32_t attempts_run = 0;
};

/// Decomposition of K_{2n} into 2n-1 perfect matchings, each with |disc|
/// pushed away from 0. Output always verifies; status says whether the
/// configured targets were reached.
PipelineResult decompose_high_discrepancy(const SignedCompleteGraph& g,
                                          const PipelineConfig& config);

/// Same machinery centered at disc(K). Throws Precondition when |disc(K)| > p0;
/// p0 must lie in (0, 1].
PipelineResult decompose_unbalanced(const SignedCompleteGraph& g, const PipelineConfig& config,
                                    double p0);

struct ColorReport {
  std::uint32_t dominant = 0;
  std::uint32_t count = 0;
  Rational excess;  // count - n/k
  std::vector<std::uint32_t> counts;  // index 0 is colour 1
};

struct MulticolorResult {
  PipelineResult pipeline;
  std::uint32_t num_colors = 0;
  std::vector<ColorReport> per_matching;
};

/// colors[e] in [1, k] per edge index. Colour k maps to -1, the rest to +1;
/// k = 2 runs the plain high-discrepancy pipeline, k > 2 the re-centered one.
MulticolorResult multicolor_decompose(Vertex num_vertices, std::span<const std::uint32_t> colors,
                                      std::uint32_t k, const PipelineConfig& config);

/// The checkable content of a result. Matchings are raw edge lists so that
/// tampered inputs can still be inspected.
struct ResultClaims {
  Vertex num_vertices = 0;
  std::vector<std::vector<Edge>> matchings;
  std::vector<Rational> signed_disc;
  Rational min_abs_disc;
  Rational center;
};

ResultClaims claims_of(const PipelineResult& r);
/// Throws Parse.
ResultClaims claims_from_json(const nlohmann::json& j);

/// Recomputes everything from the raw edges.
VerificationReport verify_claims(const SignedCompleteGraph& g, const ResultClaims& claims,
                                 const Rational& claimed_min);
VerificationReport verify_result(const SignedCompleteGraph& g, const PipelineResult& result,
                                 const Rational& claimed_min);

nlohmann::json pipeline_result_to_json(const PipelineResult& r, bool explain = false);
nlohmann::json multicolor_to_json(const MulticolorResult& r, bool explain = false);
nlohmann::json swap_log_to_json(const SwapLog& log);

}  // namespace hidisc
