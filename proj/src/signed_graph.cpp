#include "hidisc/signed_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hidisc/kernels.hpp"

namespace hidisc {

Edge make_edge(Vertex a, Vertex b) {
  if (a == b) fail(ErrorCode::InvalidEdge, "loop at vertex " + std::to_string(a));
  return a < b ? Edge{a, b} : Edge{b, a};
}

EdgeIndex edge_index(Vertex u, Vertex v, Vertex num_vertices) {
  if (u == v || u >= num_vertices || v >= num_vertices) {
    fail(ErrorCode::InvalidEdge, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                     ") on " + std::to_string(num_vertices) + " vertices");
  }
  const std::uint64_t hi = std::max(u, v);
  const std::uint64_t lo = std::min(u, v);
  return hi * (hi - 1) / 2 + lo;
}

Edge edge_at(EdgeIndex index) {
  auto hi = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0);
  while (hi * (hi - 1) / 2 > index) --hi;
  while ((hi + 1) * hi / 2 <= index) ++hi;
  return Edge{static_cast<Vertex>(index - hi * (hi - 1) / 2), static_cast<Vertex>(hi)};
}

SignedCompleteGraph::SignedCompleteGraph(Vertex num_vertices, std::vector<std::int8_t> signs)
    : num_vertices_(num_vertices), num_edges_(choose2(num_vertices)), signs_(std::move(signs)) {
  if (num_vertices < 2) fail(ErrorCode::InvalidArgument, "need at least 2 vertices");
  if (signs_.size() != num_edges_) {
    fail(ErrorCode::InvalidArgument, "expected " + std::to_string(num_edges_) + " signs, got " +
                                         std::to_string(signs_.size()));
  }
  for (std::size_t e = 0; e < signs_.size(); ++e) {
    if (signs_[e] != 1 && signs_[e] != -1) {
      fail(ErrorCode::InvalidArgument, "sign at edge " + std::to_string(e) + " is not +-1");
    }
    positive_count_ += signs_[e] == 1;
  }
  signs_.resize(signs_.size() + 3, 0);
}

SignedCompleteGraph SignedCompleteGraph::all_plus(Vertex num_vertices) {
  return SignedCompleteGraph(num_vertices, std::vector<std::int8_t>(choose2(num_vertices), 1));
}

SignedCompleteGraph SignedCompleteGraph::negated() const {
  std::vector<std::int8_t> flipped(signs().begin(), signs().end());
  for (auto& s : flipped) s = static_cast<std::int8_t>(-s);
  return SignedCompleteGraph(num_vertices_, std::move(flipped));
}

EdgeSet::EdgeSet(Vertex num_vertices, std::vector<EdgeIndex> indices)
    : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  const std::uint64_t limit = choose2(num_vertices);
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= limit) {
      fail(ErrorCode::InvalidEdge, "edge index " + std::to_string(indices_[i]) + " out of range");
    }
    if (i > 0 && indices_[i] == indices_[i - 1]) {
      fail(ErrorCode::InvalidEdge, "edge index " + std::to_string(indices_[i]) + " repeated");
    }
  }
}

namespace {
std::vector<EdgeIndex> to_indices(Vertex num_vertices, std::span<const Edge> edges) {
  std::vector<EdgeIndex> out;
  out.reserve(edges.size());
  for (const Edge& e : edges) out.push_back(edge_index(e.u, e.v, num_vertices));
  return out;
}
}  // namespace

EdgeSet::EdgeSet(Vertex num_vertices, std::span<const Edge> edges)
    : EdgeSet(num_vertices, to_indices(num_vertices, edges)) {}

EdgeSet EdgeSet::all(Vertex num_vertices) {
  std::vector<EdgeIndex> idx(choose2(num_vertices));
  std::iota(idx.begin(), idx.end(), EdgeIndex{0});
  return EdgeSet(num_vertices, std::move(idx));
}

Matching::Matching(std::vector<Edge> edges) : edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  std::vector<Vertex> seen;
  seen.reserve(edges_.size() * 2);
  for (const Edge& e : edges_) {
    if (e.u >= e.v) fail(ErrorCode::InvalidEdge, "edge endpoints must satisfy u < v");
    seen.push_back(e.u);
    seen.push_back(e.v);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    fail(ErrorCode::InvalidArgument, "matching edges share vertex " +
                                         std::to_string(*std::adjacent_find(seen.begin(), seen.end())));
  }
}

bool Matching::contains(const Edge& e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

bool Matching::is_perfect(Vertex num_vertices) const {
  if (edges_.size() * 2 != num_vertices) return false;
  return std::all_of(edges_.begin(), edges_.end(),
                     [&](const Edge& e) { return e.v < num_vertices; });
}

std::vector<Vertex> Matching::partners(Vertex num_vertices) const {
  std::vector<Vertex> p(num_vertices, kNoPartner);
  for (const Edge& e : edges_) {
    if (e.v >= num_vertices) fail(ErrorCode::InvalidVertex, "matching vertex out of range");
    p[e.u] = e.v;
    p[e.v] = e.u;
  }
  return p;
}

std::int64_t signed_sum(const SignedCompleteGraph& g, const EdgeSet& subset) {
  std::int64_t sum = 0;
  for (EdgeIndex e : subset.indices()) {
    if (e >= g.num_edges()) fail(ErrorCode::InvalidEdge, "edge index out of range");
    sum += g.sign(e);
  }
  return sum;
}

std::int64_t signed_sum(const SignedCompleteGraph& g, std::span<const Edge> edges) {
  std::int64_t sum = 0;
  for (const Edge& e : edges) sum += g.sign(e.u, e.v);
  return sum;
}

namespace {
Discrepancy make_discrepancy(std::int64_t sum, std::size_t size) {
  if (size == 0) fail(ErrorCode::EmptySubgraph, "discrepancy of an empty edge set");
  Rational r(sum, static_cast<std::int64_t>(size));
  return {r, r.abs()};
}
}  // namespace

Discrepancy discrepancy(const SignedCompleteGraph& g, const EdgeSet& subset) {
  return make_discrepancy(signed_sum(g, subset), subset.size());
}

Discrepancy discrepancy(const SignedCompleteGraph& g, std::span<const Edge> edges) {
  return make_discrepancy(signed_sum(g, edges), edges.size());
}

Rational graph_discrepancy(const SignedCompleteGraph& g) {
  const auto s = kernels::active().sign_total(g.signs().data(), g.signs().size());
  return Rational(s, static_cast<std::int64_t>(g.num_edges()));
}

DegreeStats degree_stats(const SignedCompleteGraph& g, Vertex v) {
  if (v >= g.num_vertices()) fail(ErrorCode::InvalidVertex, "vertex " + std::to_string(v));
  DegreeStats d{v, 0, 0};
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (u == v) continue;
    (g.sign(u, v) > 0 ? d.d_plus : d.d_minus) += 1;
  }
  return d;
}

std::uint32_t common_signed_neighbors(const SignedCompleteGraph& g, Vertex x, Vertex y,
                                      int sign_x, int sign_y) {
  if (x >= g.num_vertices() || y >= g.num_vertices() || x == y) {
    fail(ErrorCode::InvalidVertex, "pair (" + std::to_string(x) + "," + std::to_string(y) + ")");
  }
  std::uint32_t count = 0;
  for (Vertex z = 0; z < g.num_vertices(); ++z) {
    if (z == x || z == y) continue;
    count += g.sign(x, z) == sign_x && g.sign(y, z) == sign_y;
  }
  return count;
}

SignedCompleteGraph generate_signing(Vertex num_vertices, const SigningSpec& spec, Seed seed) {
  if (num_vertices < 2) fail(ErrorCode::InvalidArgument, "need at least 2 vertices");
  const std::uint64_t m = choose2(num_vertices);
  std::vector<std::int8_t> signs(m, 1);
  Rng rng(seed);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, signing::Biased>) {
          if (!(s.p >= 0.0 && s.p <= 1.0)) fail(ErrorCode::InvalidArgument, "p outside [0,1]");
          for (auto& x : signs) x = rng.unit() < s.p ? 1 : -1;
        } else if constexpr (std::is_same_v<T, signing::ExactCount>) {
          if (s.positive > m) {
            fail(ErrorCode::CountOverflow, std::to_string(s.positive) + " positive edges requested, only " +
                                               std::to_string(m) + " exist");
          }
          std::vector<EdgeIndex> idx(m);
          std::iota(idx.begin(), idx.end(), EdgeIndex{0});
          // Partial Fisher-Yates: the first `positive` slots are a uniform subset.
          for (std::uint64_t i = 0; i < s.positive; ++i) {
            std::swap(idx[i], idx[i + rng.below(m - i)]);
          }
          std::fill(signs.begin(), signs.end(), std::int8_t{-1});
          for (std::uint64_t i = 0; i < s.positive; ++i) signs[idx[i]] = 1;
        } else if constexpr (std::is_same_v<T, signing::FromEdgeList>) {
          for (const Edge& e : s.negative) {
            if (e.u == e.v || e.u >= num_vertices || e.v >= num_vertices) {
              fail(ErrorCode::Parse, "malformed negative edge (" + std::to_string(e.u) + ", " +
                                         std::to_string(e.v) + ")");
            }
            signs[edge_index(e.u, e.v, num_vertices)] = -1;
          }
        }
      },
      spec);
  return SignedCompleteGraph(num_vertices, std::move(signs));
}

SignedNeighborhoods::SignedNeighborhoods(const SignedCompleteGraph& g)
    : num_vertices_(g.num_vertices()),
      words_((g.num_vertices() + 63) / 64),
      pos_(static_cast<std::size_t>(g.num_vertices()) * words_, 0),
      neg_(static_cast<std::size_t>(g.num_vertices()) * words_, 0),
      d_plus_(g.num_vertices(), 0) {
  for (Vertex hi = 1; hi < num_vertices_; ++hi) {
    for (Vertex lo = 0; lo < hi; ++lo) {
      const bool plus = g.sign(static_cast<EdgeIndex>(hi) * (hi - 1) / 2 + lo) > 0;
      auto& rows = plus ? pos_ : neg_;
      rows[hi * words_ + lo / 64] |= std::uint64_t{1} << (lo % 64);
      rows[lo * words_ + hi / 64] |= std::uint64_t{1} << (hi % 64);
      if (plus) {
        ++d_plus_[hi];
        ++d_plus_[lo];
      }
    }
  }
}

}  // namespace hidisc
