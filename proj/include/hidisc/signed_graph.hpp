#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "hidisc/rational.hpp"
#include "hidisc/rng.hpp"

namespace hidisc {

using Vertex = std::uint32_t;
using EdgeIndex = std::uint64_t;

/// Unordered edge, stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
  bool touches(Vertex x) const noexcept { return u == x || v == x; }
  Vertex other(Vertex x) const noexcept { return x == u ? v : u; }
};

Edge make_edge(Vertex a, Vertex b);

inline std::uint64_t choose2(std::uint64_t n) noexcept { return n * (n - 1) / 2; }

/// Column-major lower-triangular index: max*(max-1)/2 + min.
EdgeIndex edge_index(Vertex u, Vertex v, Vertex num_vertices);
inline EdgeIndex edge_index(const Edge& e, Vertex num_vertices) {
  return edge_index(e.u, e.v, num_vertices);
}
/// Inverse of edge_index.
Edge edge_at(EdgeIndex index);

/// A +-1 signing of the complete graph on num_vertices vertices.
/// Immutable after construction.
class SignedCompleteGraph {
 public:
  SignedCompleteGraph(Vertex num_vertices, std::vector<std::int8_t> signs);

  static SignedCompleteGraph all_plus(Vertex num_vertices);

  Vertex num_vertices() const noexcept { return num_vertices_; }
  std::uint64_t num_edges() const noexcept { return num_edges_; }

  int sign(EdgeIndex e) const noexcept { return signs_[e]; }
  int sign(Vertex u, Vertex v) const { return signs_[edge_index(u, v, num_vertices_)]; }
  int sign(const Edge& e) const { return sign(e.u, e.v); }

  /// One entry per edge in edge-index order. The backing buffer carries three
  /// zero bytes past the end so 32-bit gathers at any valid index stay in bounds.
  std::span<const std::int8_t> signs() const noexcept {
    return {signs_.data(), static_cast<std::size_t>(num_edges_)};
  }

  std::uint64_t positive_count() const noexcept { return positive_count_; }
  std::int64_t total_sum() const noexcept {
    return 2 * static_cast<std::int64_t>(positive_count_) -
           static_cast<std::int64_t>(num_edges_);
  }

  /// Same vertex set, every sign negated.
  SignedCompleteGraph negated() const;

  friend bool operator==(const SignedCompleteGraph& a, const SignedCompleteGraph& b) {
    return a.num_vertices_ == b.num_vertices_ && a.signs_ == b.signs_;
  }

 private:
  Vertex num_vertices_;
  std::uint64_t num_edges_;
  std::vector<std::int8_t> signs_;
  std::uint64_t positive_count_ = 0;
};

/// Sorted, duplicate-free set of edge indices.
class EdgeSet {
 public:
  EdgeSet() = default;
  /// Throws InvalidEdge on an out-of-range or repeated index.
  EdgeSet(Vertex num_vertices, std::vector<EdgeIndex> indices);
  EdgeSet(Vertex num_vertices, std::span<const Edge> edges);

  static EdgeSet all(Vertex num_vertices);

  std::span<const EdgeIndex> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

 private:
  std::vector<EdgeIndex> indices_;
};

/// Vertex-disjoint edge set, kept sorted.
class Matching {
 public:
  Matching() = default;
  /// Throws InvalidArgument when two edges share a vertex.
  explicit Matching(std::vector<Edge> edges);

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool contains(const Edge& e) const;
  bool is_perfect(Vertex num_vertices) const;
  /// partner[v] for covered v, kNoPartner otherwise.
  std::vector<Vertex> partners(Vertex num_vertices) const;

  static constexpr Vertex kNoPartner = UINT32_MAX;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<Edge> edges_;
};

std::int64_t signed_sum(const SignedCompleteGraph& g, const EdgeSet& subset);
std::int64_t signed_sum(const SignedCompleteGraph& g, std::span<const Edge> edges);
inline std::int64_t signed_sum(const SignedCompleteGraph& g, const Matching& m) {
  return signed_sum(g, m.edges());
}

struct Discrepancy {
  Rational signed_value;
  Rational absolute;
};

/// Throws EmptySubgraph on an empty subset.
Discrepancy discrepancy(const SignedCompleteGraph& g, const EdgeSet& subset);
Discrepancy discrepancy(const SignedCompleteGraph& g, std::span<const Edge> edges);
inline Discrepancy discrepancy(const SignedCompleteGraph& g, const Matching& m) {
  return discrepancy(g, m.edges());
}
/// Signed discrepancy of the whole graph.
Rational graph_discrepancy(const SignedCompleteGraph& g);

struct DegreeStats {
  Vertex vertex = 0;
  std::uint32_t d_plus = 0;
  std::uint32_t d_minus = 0;
};

DegreeStats degree_stats(const SignedCompleteGraph& g, Vertex v);
/// #{z not in {x, y} : sign(xz) == sign_x and sign(yz) == sign_y}.
std::uint32_t common_signed_neighbors(const SignedCompleteGraph& g, Vertex x, Vertex y,
                                      int sign_x, int sign_y);

namespace signing {
struct AllPlus {};
struct Biased {
  double p = 0.5;
};
struct ExactCount {
  std::uint64_t positive = 0;
};
struct FromEdgeList {
  std::vector<Edge> negative;
};
}  // namespace signing

using SigningSpec =
    std::variant<signing::AllPlus, signing::Biased, signing::ExactCount, signing::FromEdgeList>;

SignedCompleteGraph generate_signing(Vertex num_vertices, const SigningSpec& spec, Seed seed);

/// Positive/negative neighbourhoods as bit rows, one 64-bit word per 64 vertices.
class SignedNeighborhoods {
 public:
  explicit SignedNeighborhoods(const SignedCompleteGraph& g);

  std::size_t words() const noexcept { return words_; }
  Vertex num_vertices() const noexcept { return num_vertices_; }
  const std::uint64_t* positive(Vertex v) const noexcept { return &pos_[v * words_]; }
  const std::uint64_t* negative(Vertex v) const noexcept { return &neg_[v * words_]; }
  std::uint32_t d_plus(Vertex v) const noexcept { return d_plus_[v]; }
  std::uint32_t d_minus(Vertex v) const noexcept { return num_vertices_ - 1 - d_plus_[v]; }

 private:
  Vertex num_vertices_;
  std::size_t words_;
  std::vector<std::uint64_t> pos_;
  std::vector<std::uint64_t> neg_;
  std::vector<std::uint32_t> d_plus_;
};

}  // namespace hidisc
