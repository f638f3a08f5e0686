#include "hidisc/switchers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "hidisc/kernels.hpp"

namespace hidisc {

FourCycle FourCycle::canonical(Vertex a, Vertex b, Vertex c, Vertex d) {
  std::array<Vertex, 4> in{a, b, c, d};
  auto sorted = in;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::InvalidArgument, "4-cycle with repeated vertex");
  }
  const auto start = static_cast<std::size_t>(std::min_element(in.begin(), in.end()) - in.begin());
  FourCycle q;
  for (std::size_t i = 0; i < 4; ++i) q.v[i] = in[(start + i) % 4];
  if (q.v[1] > q.v[3]) std::swap(q.v[1], q.v[3]);
  return q;
}

bool FourCycle::is_canonical() const noexcept {
  const bool distinct = v[0] != v[1] && v[0] != v[2] && v[0] != v[3] && v[1] != v[2] &&
                        v[1] != v[3] && v[2] != v[3];
  return distinct && v[0] < v[1] && v[0] < v[2] && v[0] < v[3] && v[1] < v[3];
}

std::array<Edge, 4> FourCycle::edges() const {
  return {make_edge(v[0], v[1]), make_edge(v[1], v[2]), make_edge(v[2], v[3]),
          make_edge(v[3], v[0])};
}

Classification classify_signs(std::array<int, 4> s) {
  const int plus = static_cast<int>(std::count(s.begin(), s.end(), 1));
  Classification c;
  switch (plus) {
    case 4: c.type = 1; break;
    case 0: c.type = 2; break;
    case 3: c.type = 5; break;
    case 1: c.type = 6; break;
    default: c.type = s[0] == s[2] ? 4 : 3; break;
  }
  c.is_switcher = c.type >= 4;
  return c;
}

Classification classify_four_cycle(const SignedCompleteGraph& g, const FourCycle& q) {
  if (!q.is_canonical()) fail(ErrorCode::InvalidArgument, "4-cycle is not canonical");
  for (Vertex x : q.v) {
    if (x >= g.num_vertices()) fail(ErrorCode::InvalidVertex, "4-cycle vertex out of range");
  }
  const auto e = q.edges();
  return classify_signs({g.sign(e[0]), g.sign(e[1]), g.sign(e[2]), g.sign(e[3])});
}

std::uint64_t total_four_cycles(Vertex nv) {
  if (nv < 4) return 0;
  const std::uint64_t n = nv;
  return 3 * (n * (n - 1) / 2 * (n - 2) / 3 * (n - 3) / 4);
}

namespace {

SwitcherCensus census_enumerate(const SignedCompleteGraph& g) {
  SwitcherCensus c;
  const Vertex nv = g.num_vertices();
  std::array<std::uint64_t, 7> counts{};
  for (Vertex a = 0; a < nv; ++a) {
    for (Vertex b = a + 1; b < nv; ++b) {
      for (Vertex cc = b + 1; cc < nv; ++cc) {
        for (Vertex d = cc + 1; d < nv; ++d) {
          const int ab = g.sign(a, b), ac = g.sign(a, cc), ad = g.sign(a, d);
          const int bc = g.sign(b, cc), bd = g.sign(b, d), cd = g.sign(cc, d);
          ++counts[classify_signs({ab, bc, cd, ad}).type];  // a-b-c-d
          ++counts[classify_signs({ab, bd, cd, ac}).type];  // a-b-d-c
          ++counts[classify_signs({ac, bc, bd, ad}).type];  // a-c-b-d
        }
      }
    }
  }
  for (int t = 1; t <= 6; ++t) c.counts_by_type[t] = static_cast<double>(counts[t]);
  return c;
}

// Each 4-cycle has two diagonals. For a pair {x, y} taken as a diagonal, a
// middle vertex z contributes the sign pair (sign(xz), sign(yz)); a cycle's
// type depends only on the two middle vertices' pairs. Summing over all
// pairs counts every cycle twice.
SwitcherCensus census_codegree(const SignedCompleteGraph& g) {
  const SignedNeighborhoods nb(g);
  const auto& k = kernels::active();
  const Vertex nv = g.num_vertices();
  std::array<std::uint64_t, 7> twice{};
  auto c2 = [](std::uint64_t m) { return m * (m - (m > 0)) / 2; };
  for (Vertex x = 0; x < nv; ++x) {
    for (Vertex y = x + 1; y < nv; ++y) {
      const auto d = k.codegrees(nb.positive(x), nb.negative(x), nb.positive(y),
                                 nb.negative(y), nb.words());
      const std::uint64_t mixed = d.plus_minus + d.minus_plus;
      twice[1] += c2(d.both_plus);
      twice[2] += c2(d.both_minus);
      twice[3] += d.both_plus * d.both_minus + c2(d.plus_minus) + c2(d.minus_plus);
      twice[4] += d.plus_minus * d.minus_plus;
      twice[5] += d.both_plus * mixed;
      twice[6] += d.both_minus * mixed;
    }
  }
  SwitcherCensus c;
  for (int t = 1; t <= 6; ++t) c.counts_by_type[t] = static_cast<double>(twice[t] / 2);
  return c;
}

SwitcherCensus census_sampled(const SignedCompleteGraph& g, std::uint64_t samples, Seed seed) {
  if (samples == 0) fail(ErrorCode::InvalidArgument, "sampled census needs samples >= 1");
  const Vertex nv = g.num_vertices();
  Rng rng(seed);
  std::array<std::uint64_t, 7> hits{};
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::array<Vertex, 4> q{};
    for (std::size_t i = 0; i < 4; ++i) {
      bool fresh;
      do {
        q[i] = static_cast<Vertex>(rng.below(nv));
        fresh = std::find(q.begin(), q.begin() + i, q[i]) == q.begin() + i;
      } while (!fresh);
    }
    std::sort(q.begin(), q.end());
    const auto [a, b, c, d] = q;
    FourCycle cyc;
    switch (rng.below(3)) {
      case 0: cyc.v = {a, b, c, d}; break;
      case 1: cyc.v = {a, b, d, c}; break;
      default: cyc.v = {a, c, b, d}; break;
    }
    ++hits[classify_four_cycle(g, cyc).type];
  }
  SwitcherCensus c;
  c.total_c4 = total_four_cycles(nv);
  const double total = static_cast<double>(c.total_c4);
  const double ns = static_cast<double>(samples);
  for (int t = 1; t <= 6; ++t) c.counts_by_type[t] = total * static_cast<double>(hits[t]) / ns;
  const double p = static_cast<double>(hits[4] + hits[5] + hits[6]) / ns;
  c.ci_halfwidth = 1.96 * total * std::sqrt(p * (1.0 - p) / ns);
  c.samples = samples;
  c.seed = seed;
  return c;
}

}  // namespace

SwitcherCensus count_switchers(const SignedCompleteGraph& g, const CensusOptions& options) {
  if (g.num_vertices() < 4) fail(ErrorCode::TooSmall, "switcher census needs >= 4 vertices");
  SwitcherCensus c;
  if (options.mode == CensusMode::Sampled) {
    c = census_sampled(g, options.samples, options.seed);
    c.mode = CensusMode::Sampled;
  } else {
    c = options.method == ExactMethod::Enumerate ? census_enumerate(g) : census_codegree(g);
    c.mode = CensusMode::Exact;
    c.total_c4 = total_four_cycles(g.num_vertices());
  }
  c.switcher_count = c.counts_by_type[4] + c.counts_by_type[5] + c.counts_by_type[6];
  return c;
}

FourCycle AlternatingCycle::as_four_cycle() const {
  if (vertices.size() != 4) fail(ErrorCode::InvalidArgument, "component is not a 4-cycle");
  return FourCycle::canonical(vertices[0], vertices[1], vertices[2], vertices[3]);
}

std::vector<AlternatingCycle> alternating_components(const Matching& m1, const Matching& m2,
                                                     Vertex nv) {
  if (!m1.is_perfect(nv) || !m2.is_perfect(nv)) {
    fail(ErrorCode::InvalidArgument, "alternating components need two perfect matchings on " +
                                         std::to_string(nv) + " vertices");
  }
  for (const Edge& e : m1.edges()) {
    if (m2.contains(e)) {
      fail(ErrorCode::Overlap, "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                   ") is in both matchings");
    }
  }
  const auto p1 = m1.partners(nv);
  const auto p2 = m2.partners(nv);
  std::vector<char> seen(nv, 0);
  std::vector<AlternatingCycle> out;
  for (Vertex s = 0; s < nv; ++s) {
    if (seen[s]) continue;
    AlternatingCycle cyc;
    Vertex cur = s;
    do {
      const Vertex next = p1[cur];
      cyc.vertices.push_back(cur);
      cyc.vertices.push_back(next);
      seen[cur] = seen[next] = 1;
      cur = p2[next];
    } while (cur != s);
    out.push_back(std::move(cyc));
  }
  return out;
}

DrcThresholds DrcThresholds::paper() { return {1.89, 1e-4, 1.0 / 16000.0}; }
DrcThresholds DrcThresholds::desk() { return {1.89, 0.05, 0.05}; }

DegreeCensus degree_census(const SignedCompleteGraph& g, double threshold_fraction) {
  const double n = g.num_vertices() / 2.0;
  DegreeCensus c;
  const SignedNeighborhoods nb(g);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    c.n1 += at_least(Rational(nb.d_plus(v)), threshold_fraction * n);
    c.n2 += at_least(Rational(nb.d_minus(v)), threshold_fraction * n);
  }
  return c;
}

std::optional<DrcWitness> drc_witness(const SignedCompleteGraph& g, const DrcThresholds& th) {
  const Vertex nv = g.num_vertices();
  const double n = nv / 2.0;
  const SignedNeighborhoods nb(g);
  const auto& k = kernels::active();
  const std::size_t words = nb.words();

  // good_row[x] has bit y set iff (x, y) is a good pair; good_col is its transpose.
  std::vector<std::uint64_t> good_row(static_cast<std::size_t>(nv) * words, 0);
  std::vector<std::uint64_t> good_col(static_cast<std::size_t>(nv) * words, 0);
  for (Vertex x = 0; x < nv; ++x) {
    for (Vertex y = 0; y < nv; ++y) {
      if (x == y) continue;
      const auto common = k.and_popcount(nb.positive(x), nb.negative(y), words);
      if (at_least(Rational(static_cast<std::int64_t>(common)), th.good_pair_threshold * n)) {
        good_row[x * words + y / 64] |= std::uint64_t{1} << (y % 64);
        good_col[y * words + x / 64] |= std::uint64_t{1} << (x % 64);
      }
    }
  }

  Vertex center = 0;
  std::uint64_t best = 0;
  for (Vertex v = 0; v < nv; ++v) {
    std::uint64_t pairs = 0;
    const std::uint64_t* plus = nb.positive(v);
    for (std::size_t w = 0; w < words; ++w) {
      for (std::uint64_t bits = plus[w]; bits; bits &= bits - 1) {
        const Vertex x = static_cast<Vertex>(w * 64 + std::countr_zero(bits));
        pairs += k.and_popcount(&good_row[x * words], nb.negative(v), words);
      }
    }
    if (pairs > best) {
      best = pairs;
      center = v;
    }
  }
  if (best == 0) return std::nullopt;

  std::vector<std::uint64_t> xs(nb.positive(center), nb.positive(center) + words);
  std::vector<std::uint64_t> ys(nb.negative(center), nb.negative(center) + words);
  auto in = [&](const std::vector<std::uint64_t>& s, Vertex u) {
    return (s[u / 64] >> (u % 64)) & 1U;
  };
  std::vector<std::uint32_t> degree(nv, 0);
  for (Vertex u = 0; u < nv; ++u) {
    if (in(xs, u)) degree[u] = static_cast<std::uint32_t>(k.and_popcount(&good_row[u * words], ys.data(), words));
    if (in(ys, u)) degree[u] = static_cast<std::uint32_t>(k.and_popcount(&good_col[u * words], xs.data(), words));
  }
  const double target = th.min_degree_target * n;
  std::uint32_t min_degree = 0;
  for (;;) {
    Vertex worst = nv;
    for (Vertex u = 0; u < nv; ++u) {
      if ((in(xs, u) || in(ys, u)) && (worst == nv || degree[u] < degree[worst])) worst = u;
    }
    if (worst == nv) return std::nullopt;
    if (at_least(Rational(degree[worst]), target)) {
      min_degree = degree[worst];
      break;
    }
    const bool from_x = in(xs, worst);
    auto& own = from_x ? xs : ys;
    own[worst / 64] &= ~(std::uint64_t{1} << (worst % 64));
    const auto& other = from_x ? ys : xs;
    const auto& rel = from_x ? good_row : good_col;
    for (Vertex u = 0; u < nv; ++u) {
      if (in(other, u) && ((rel[worst * words + u / 64] >> (u % 64)) & 1U)) --degree[u];
    }
  }

  DrcWitness w;
  w.center = center;
  w.good_pairs = best;
  w.min_degree = min_degree;
  w.thresholds = th;
  for (Vertex u = 0; u < nv; ++u) {
    if (in(xs, u)) w.x.push_back(u);
    if (in(ys, u)) w.y.push_back(u);
  }
  const auto dc = degree_census(g, th.degree_threshold);
  w.n1 = dc.n1;
  w.n2 = dc.n2;
  return w;
}

}  // namespace hidisc
