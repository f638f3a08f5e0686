#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hidisc/factorizations.hpp"
#include "hidisc/signed_graph.hpp"
#include "hidisc/switchers.hpp"

namespace hidisc {

using Permutation = std::vector<Vertex>;

/// Uniform permutation of [0, n) by Fisher-Yates; deterministic per seed.
Permutation random_permutation(std::size_t n, Seed seed);
bool is_permutation_of(std::span<const Vertex> perm, std::size_t n);

/// Family of k-tuples with distinct entries over the ground set [0, n).
class TupleFamily {
 public:
  TupleFamily(std::uint32_t ground_size, std::uint32_t arity, std::vector<std::uint32_t> flat);

  /// Both orientations (u, v) and (v, u) of every edge.
  static TupleFamily orientation_lift(Vertex num_vertices, std::span<const Edge> edges);
  /// All 8 orientations (rotations and reflections) of every 4-cycle.
  static TupleFamily cycle_orientations(Vertex num_vertices, std::span<const FourCycle> cycles);

  std::uint32_t ground_size() const noexcept { return ground_size_; }
  std::uint32_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return flat_.size() / arity_; }
  std::span<const std::uint32_t> tuple(std::size_t i) const {
    return {flat_.data() + i * arity_, arity_};
  }
  std::span<const std::uint32_t> flat() const noexcept { return flat_; }
  /// Largest number of tuples containing one ground element.
  std::uint32_t multiplicity_bound() const noexcept { return delta_; }

 private:
  std::uint32_t ground_size_;
  std::uint32_t arity_;
  std::vector<std::uint32_t> flat_;
  std::uint32_t delta_ = 0;
};

/// +-1 signing of X^(k), with |positive| when it is known exactly.
class TupleSigning {
 public:
  using Evaluator = std::function<int(std::span<const std::uint32_t>)>;

  TupleSigning(std::uint32_t arity, Evaluator evaluator,
               std::optional<long double> positive_count);

  /// sigma'((u, v)) = sigma({u, v}); positive_count = 2 |sigma^-1(+1)|.
  static TupleSigning edge_lift(const SignedCompleteGraph& g);
  /// +1 on (v1..v4) iff v1v2v3v4 is a switcher; positive_count = 8 * switchers
  /// taken from an exact census.
  static TupleSigning switcher_lift(const SignedCompleteGraph& g, const SwitcherCensus& exact);
  static TupleSigning constant(std::uint32_t arity, int value, std::uint32_t ground_size);

  std::uint32_t arity() const noexcept { return arity_; }
  int operator()(std::span<const std::uint32_t> t) const { return evaluator_(t); }
  const std::optional<long double>& positive_count() const noexcept { return positive_; }
  /// Set for edge lifts so hit counts can take the kernel path.
  const SignedCompleteGraph* edge_graph() const noexcept { return graph_.get(); }

 private:
  std::uint32_t arity_;
  Evaluator evaluator_;
  std::optional<long double> positive_;
  std::shared_ptr<const SignedCompleteGraph> graph_;
};

/// n^(k) = n (n-1) ... (n-k+1).
long double falling_factorial(std::uint64_t n, std::uint32_t k);

/// #{t in family : signing(pi(t)) = +1}. Throws ArityMismatch.
std::uint64_t hit_count(const TupleFamily& family, const TupleSigning& signing,
                        std::span<const Vertex> pi);

/// Streaming mean/variance with pairwise merge.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x);
  void merge(const Moments& other);
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
};

struct TailRow {
  double t = 0;
  double empirical = 0;                 // P(|h - p|F|| >= t)
  double chebyshev = 0;                 // variance / t^2, capped at 1
  std::optional<double> talagrand;      // reference curve about the median
};

struct ConcentrationReport {
  std::uint64_t trials = 0;
  Seed seed = 0;
  std::size_t family_size = 0;
  std::uint32_t arity = 0;
  std::uint32_t delta = 0;
  double p = 0;
  double target = 0;                    // p |F|
  double mean = 0;
  double variance = 0;
  double median = 0;
  double mean_tolerance = 0;            // 4 sd / sqrt(trials)
  bool mean_pass = false;
  double median_window = 0;             // n^(3/4)
  double fraction_within_window = 0;
  bool window_pass = false;             // fraction >= 1/2
  double variance_bound = 0;            // ((1 + k D) D + 10 k^2 D^2) n
  double lipschitz_c = 0;               // 2 D
  double certificate_r = 0;             // k
  std::vector<TailRow> tail;
  std::vector<std::uint64_t> samples;
};

struct ConcentrationOptions {
  std::uint64_t trials = 2000;
  Seed seed = 0;
  bool keep_samples = false;
};

/// Throws UnknownPositiveCount when p is not known exactly; trials >= 100.
ConcentrationReport concentration_experiment(const TupleFamily& family,
                                             const TupleSigning& signing,
                                             const ConcentrationOptions& options);

double chebyshev_bound(double variance, double lambda);
double talagrand_bound(double t, double r, double c, double median);

struct BalanceOutcome {
  bool found = false;
  std::uint64_t trials_used = 0;
  Permutation permutation;
  std::vector<Rational> per_factor_disc;   // signed, of pi(F_i)
  Rational worst_deviation;                // max_i |disc(pi(F_i)) - disc(K)|
};

/// Draws permutations until every |disc(pi(F_i)) - disc(K)| <= epsilon. On
/// exhaustion returns the permutation with the smallest worst deviation.
BalanceOutcome find_balanced_permutation(const SignedCompleteGraph& g,
                                         std::span<const std::vector<Edge>> factors,
                                         double epsilon, std::uint64_t max_trials, Seed seed);
BalanceOutcome find_balanced_permutation(const SignedCompleteGraph& g,
                                         const FactorDecomposition& d, double epsilon,
                                         std::uint64_t max_trials, Seed seed);
BalanceOutcome find_balanced_permutation(const SignedCompleteGraph& g,
                                         const OneFactorization& f, double epsilon,
                                         std::uint64_t max_trials, Seed seed);

}  // namespace hidisc
