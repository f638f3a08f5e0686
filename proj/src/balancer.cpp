#include "hidisc/balancer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hidisc/kernels.hpp"

namespace hidisc {

Permutation random_permutation(std::size_t n, Seed seed) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "permutation of an empty set");
  Permutation p(n);
  std::iota(p.begin(), p.end(), Vertex{0});
  Rng rng(seed);
  rng.shuffle(p);
  return p;
}

bool is_permutation_of(std::span<const Vertex> perm, std::size_t n) {
  if (perm.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (Vertex v : perm) {
    if (v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

TupleFamily::TupleFamily(std::uint32_t ground_size, std::uint32_t arity,
                         std::vector<std::uint32_t> flat)
    : ground_size_(ground_size), arity_(arity), flat_(std::move(flat)) {
  if (arity == 0 || flat_.empty() || flat_.size() % arity != 0) {
    fail(ErrorCode::InvalidArgument, "tuple family must hold at least one full tuple");
  }
  std::vector<std::uint32_t> occurrences(ground_size, 0);
  for (std::size_t i = 0; i < size(); ++i) {
    auto t = tuple(i);
    for (std::size_t a = 0; a < arity; ++a) {
      if (t[a] >= ground_size) fail(ErrorCode::InvalidArgument, "tuple entry out of range");
      for (std::size_t b = 0; b < a; ++b) {
        if (t[a] == t[b]) fail(ErrorCode::InvalidArgument, "tuple with repeated entry");
      }
      delta_ = std::max(delta_, ++occurrences[t[a]]);
    }
  }
}

TupleFamily TupleFamily::orientation_lift(Vertex nv, std::span<const Edge> edges) {
  std::vector<std::uint32_t> flat;
  flat.reserve(edges.size() * 4);
  for (const Edge& e : edges) flat.insert(flat.end(), {e.u, e.v, e.v, e.u});
  return TupleFamily(nv, 2, std::move(flat));
}

TupleFamily TupleFamily::cycle_orientations(Vertex nv, std::span<const FourCycle> cycles) {
  std::vector<std::uint32_t> flat;
  flat.reserve(cycles.size() * 32);
  for (const FourCycle& q : cycles) {
    for (int r = 0; r < 4; ++r) {
      for (int i = 0; i < 4; ++i) flat.push_back(q.v[(r + i) % 4]);
      for (int i = 0; i < 4; ++i) flat.push_back(q.v[(r + 4 - i) % 4]);
    }
  }
  return TupleFamily(nv, 4, std::move(flat));
}

TupleSigning::TupleSigning(std::uint32_t arity, Evaluator evaluator,
                           std::optional<long double> positive_count)
    : arity_(arity), evaluator_(std::move(evaluator)), positive_(positive_count) {}

TupleSigning TupleSigning::edge_lift(const SignedCompleteGraph& g) {
  auto shared = std::make_shared<const SignedCompleteGraph>(g);
  TupleSigning s(
      2, [shared](std::span<const std::uint32_t> t) { return shared->sign(t[0], t[1]); },
      2.0L * static_cast<long double>(g.positive_count()));
  s.graph_ = std::move(shared);
  return s;
}

TupleSigning TupleSigning::switcher_lift(const SignedCompleteGraph& g,
                                         const SwitcherCensus& exact) {
  if (exact.mode != CensusMode::Exact) {
    fail(ErrorCode::UnknownPositiveCount, "switcher lift needs an exact census");
  }
  auto shared = std::make_shared<const SignedCompleteGraph>(g);
  return TupleSigning(
      4,
      [shared](std::span<const std::uint32_t> t) {
        const auto c = classify_signs({shared->sign(t[0], t[1]), shared->sign(t[1], t[2]),
                                       shared->sign(t[2], t[3]), shared->sign(t[3], t[0])});
        return c.is_switcher ? 1 : -1;
      },
      8.0L * static_cast<long double>(exact.switcher_count));
}

TupleSigning TupleSigning::constant(std::uint32_t arity, int value, std::uint32_t ground_size) {
  return TupleSigning(
      arity, [value](std::span<const std::uint32_t>) { return value; },
      value > 0 ? falling_factorial(ground_size, arity) : 0.0L);
}

long double falling_factorial(std::uint64_t n, std::uint32_t k) {
  long double r = 1;
  for (std::uint32_t i = 0; i < k; ++i) r *= static_cast<long double>(n - i);
  return r;
}

std::uint64_t hit_count(const TupleFamily& family, const TupleSigning& signing,
                        std::span<const Vertex> pi) {
  if (family.arity() != signing.arity()) {
    fail(ErrorCode::ArityMismatch, "family arity " + std::to_string(family.arity()) +
                                       " vs signing arity " + std::to_string(signing.arity()));
  }
  if (pi.size() != family.ground_size()) {
    fail(ErrorCode::InvalidArgument, "permutation size does not match the ground set");
  }
  if (const SignedCompleteGraph* g = signing.edge_graph();
      g != nullptr && g->num_vertices() == family.ground_size()) {
    // Kernel path: the family flat array is (u0, v0, u1, v1, ...).
    const auto flat = family.flat();
    const std::size_t m = family.size();
    std::vector<std::uint32_t> us(m), vs(m);
    for (std::size_t i = 0; i < m; ++i) {
      us[i] = flat[2 * i];
      vs[i] = flat[2 * i + 1];
    }
    const std::int64_t sum = kernels::active().permuted_pair_sum(g->signs().data(), us.data(),
                                                                 vs.data(), m, pi.data());
    return static_cast<std::uint64_t>((sum + static_cast<std::int64_t>(m)) / 2);
  }
  std::vector<std::uint32_t> image(family.arity());
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto t = family.tuple(i);
    for (std::size_t a = 0; a < t.size(); ++a) image[a] = pi[t[a]];
    hits += signing(image) > 0;
  }
  return hits;
}

void Moments::add(double x) {
  ++count;
  const double d = x - mean;
  mean += d / static_cast<double>(count);
  m2 += d * (x - mean);
}

void Moments::merge(const Moments& o) {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double total = static_cast<double>(count + o.count);
  const double d = o.mean - mean;
  mean += d * static_cast<double>(o.count) / total;
  m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / total;
  count += o.count;
}

double chebyshev_bound(double variance, double lambda) {
  if (!(variance > 0) || !(lambda > 0)) {
    fail(ErrorCode::InvalidArgument, "chebyshev bound needs positive variance and lambda");
  }
  return variance / (lambda * lambda);
}

double talagrand_bound(double t, double r, double c, double median) {
  if (!(t > 0) || !(r > 0) || !(c > 0) || !(median > 0)) {
    fail(ErrorCode::InvalidArgument, "talagrand bound needs positive t, r, c, M");
  }
  return 6.0 * std::exp(-(t * t) / (16.0 * r * c * c * (median + t)));
}

ConcentrationReport concentration_experiment(const TupleFamily& family,
                                             const TupleSigning& signing,
                                             const ConcentrationOptions& options) {
  if (!signing.positive_count()) {
    fail(ErrorCode::UnknownPositiveCount,
         "p must be exact; the signing does not declare |sigma^-1(+1)|");
  }
  if (options.trials < 100) fail(ErrorCode::InvalidArgument, "need at least 100 trials");
  const std::uint32_t n = family.ground_size();
  const std::uint32_t k = family.arity();
  ConcentrationReport r;
  r.trials = options.trials;
  r.seed = options.seed;
  r.family_size = family.size();
  r.arity = k;
  r.delta = family.multiplicity_bound();
  r.p = static_cast<double>(*signing.positive_count() / falling_factorial(n, k));
  r.target = r.p * static_cast<double>(family.size());

  std::vector<std::uint64_t> h(options.trials);
  Moments moments;
  for (std::uint64_t t = 0; t < options.trials; ++t) {
    const auto pi = random_permutation(n, derive_seed(options.seed, t));
    h[t] = hit_count(family, signing, pi);
    moments.add(static_cast<double>(h[t]));
  }
  r.mean = moments.mean;
  r.variance = moments.variance();
  const double sd = std::sqrt(r.variance);
  r.mean_tolerance = 4.0 * sd / std::sqrt(static_cast<double>(options.trials));
  r.mean_pass = std::abs(r.mean - r.target) <= r.mean_tolerance + 1e-9 * std::max(1.0, r.target);

  auto sorted = h;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  r.median = sorted.size() % 2 ? static_cast<double>(sorted[mid])
                               : 0.5 * static_cast<double>(sorted[mid - 1] + sorted[mid]);

  r.median_window = std::pow(static_cast<double>(n), 0.75);
  std::uint64_t within = 0;
  for (auto x : h) within += std::abs(static_cast<double>(x) - r.target) <= r.median_window;
  r.fraction_within_window = static_cast<double>(within) / static_cast<double>(options.trials);
  r.window_pass = r.fraction_within_window >= 0.5;

  const double kd = static_cast<double>(k);
  const double dd = static_cast<double>(r.delta);
  r.variance_bound = ((1 + kd * dd) * dd + 10 * kd * kd * dd * dd) * static_cast<double>(n);
  r.lipschitz_c = 2.0 * dd;
  r.certificate_r = kd;

  const double step = 0.5 * std::max(sd, 1.0);
  for (int j = 1; j <= 12; ++j) {
    TailRow row;
    row.t = step * j;
    std::uint64_t exceed = 0;
    for (auto x : h) exceed += std::abs(static_cast<double>(x) - r.target) >= row.t;
    row.empirical = static_cast<double>(exceed) / static_cast<double>(options.trials);
    row.chebyshev = r.variance > 0 ? std::min(1.0, chebyshev_bound(r.variance, row.t)) : 0.0;
    if (r.median > 0) {
      row.talagrand = talagrand_bound(row.t, r.certificate_r, r.lipschitz_c, r.median);
    }
    r.tail.push_back(row);
  }
  // Max-from-right smoothing keeps the empirical column nonincreasing.
  for (std::size_t i = r.tail.size(); i-- > 1;) {
    r.tail[i - 1].empirical = std::max(r.tail[i - 1].empirical, r.tail[i].empirical);
  }
  if (options.keep_samples) r.samples = std::move(h);
  return r;
}

namespace {

struct FactorArrays {
  std::vector<std::uint32_t> us;
  std::vector<std::uint32_t> vs;
};

}  // namespace

BalanceOutcome find_balanced_permutation(const SignedCompleteGraph& g,
                                         std::span<const std::vector<Edge>> factors,
                                         double epsilon, std::uint64_t max_trials, Seed seed) {
  if (max_trials == 0) fail(ErrorCode::InvalidArgument, "max_trials must be >= 1");
  if (epsilon < 0) fail(ErrorCode::InvalidArgument, "epsilon must be >= 0");
  std::vector<FactorArrays> arrays;
  for (const auto& f : factors) {
    if (f.empty()) fail(ErrorCode::InvalidArgument, "factor with no edges");
    FactorArrays a;
    for (const Edge& e : f) {
      a.us.push_back(e.u);
      a.vs.push_back(e.v);
    }
    arrays.push_back(std::move(a));
  }
  const auto& k = kernels::active();
  const std::int64_t total = g.total_sum();
  const auto edges = static_cast<std::int64_t>(g.num_edges());

  BalanceOutcome best;
  bool have_best = false;
  std::vector<std::int64_t> sums(arrays.size());
  for (std::uint64_t t = 0; t < max_trials; ++t) {
    const auto pi = random_permutation(g.num_vertices(), derive_seed(seed, t));
    bool ok = true;
    Rational worst(0);
    for (std::size_t i = 0; i < arrays.size(); ++i) {
      const auto size = static_cast<std::int64_t>(arrays[i].us.size());
      sums[i] = k.permuted_pair_sum(g.signs().data(), arrays[i].us.data(), arrays[i].vs.data(),
                                    arrays[i].us.size(), pi.data());
      // |S_i / f_i - S / E| <= eps  <=>  |S_i E - S f_i| <= eps f_i E
      const std::int64_t gap = sums[i] * edges - total * size;
      const Rational dev(gap < 0 ? -gap : gap, size * edges);
      worst = std::max(worst, dev);
      ok = ok && at_most(dev, epsilon);
      if (!ok && have_best && worst >= best.worst_deviation) break;
    }
    if (!have_best || worst < best.worst_deviation || ok) {
      best.permutation = pi;
      best.worst_deviation = worst;
      best.per_factor_disc.clear();
      have_best = true;
      if (ok) {
        for (std::size_t i = 0; i < arrays.size(); ++i) {
          best.per_factor_disc.emplace_back(sums[i], static_cast<std::int64_t>(arrays[i].us.size()));
        }
      }
    }
    if (ok) {
      best.found = true;
      best.trials_used = t + 1;
      return best;
    }
  }
  best.trials_used = max_trials;
  // Recompute per-factor values for the kept permutation.
  for (std::size_t i = 0; i < arrays.size(); ++i) {
    const auto s = k.permuted_pair_sum(g.signs().data(), arrays[i].us.data(), arrays[i].vs.data(),
                                       arrays[i].us.size(), best.permutation.data());
    best.per_factor_disc.emplace_back(s, static_cast<std::int64_t>(arrays[i].us.size()));
  }
  return best;
}

BalanceOutcome find_balanced_permutation(const SignedCompleteGraph& g,
                                         const FactorDecomposition& d, double epsilon,
                                         std::uint64_t max_trials, Seed seed) {
  std::vector<std::vector<Edge>> parts;
  for (const auto& f : d.factors) parts.push_back(f.edges);
  return find_balanced_permutation(g, parts, epsilon, max_trials, seed);
}

BalanceOutcome find_balanced_permutation(const SignedCompleteGraph& g,
                                         const OneFactorization& f, double epsilon,
                                         std::uint64_t max_trials, Seed seed) {
  std::vector<std::vector<Edge>> parts;
  for (const auto& m : f.matchings) {
    parts.emplace_back(m.edges().begin(), m.edges().end());
  }
  return find_balanced_permutation(g, parts, epsilon, max_trials, seed);
}

}  // namespace hidisc
