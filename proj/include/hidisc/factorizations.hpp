#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hidisc/signed_graph.hpp"

namespace hidisc {

/// Perfect matchings partitioning all edges of K_{num_vertices}.
struct OneFactorization {
  Vertex num_vertices = 0;
  std::vector<Matching> matchings;
};

enum class FactorKind {
  C4Factor,        // disjoint 4-cycles covering every vertex
  K4Factor,        // disjoint K4's covering every vertex
  C4C6Factor,      // 4-cycles plus exactly one 6-cycle
  K4K33Factor,     // K4's plus exactly one K_{3,3}
  MatchingPair,    // union of two disjoint perfect matchings
  MatchingTriple,  // union of three disjoint perfect matchings; needs `matchings`
};

std::string_view factor_kind_name(FactorKind kind) noexcept;
FactorKind parse_factor_kind(std::string_view name);
/// Number of perfect matchings a factor of this kind splits into.
std::size_t factor_matching_count(FactorKind kind) noexcept;

struct Factor {
  FactorKind kind = FactorKind::MatchingPair;
  std::vector<Edge> edges;  // sorted
  // Optional 1-factorization of this factor. Required for MatchingTriple,
  // which has no structural split.
  std::vector<Matching> matchings;
};

struct FactorDecomposition {
  Vertex num_vertices = 0;
  std::vector<Factor> factors;
  // How it was produced: "algebraic", "search", "cache" or "matching_pairs".
  std::string construction;
};

/// Circle method: matching i pairs 2n-1 with i and i+j with i-j (mod 2n-1).
OneFactorization round_robin(Vertex num_vertices);

struct DecompositionOptions {
  // Deterministic budget for the odd-n backtracking search, in search nodes.
  std::uint64_t search_node_budget = 1'000'000;
  // Certificate cache directory; empty disables caching.
  std::optional<std::filesystem::path> cache_dir;
};

/// Cache directory named by HIDISC_CERT_CACHE, if set.
std::optional<std::filesystem::path> cache_dir_from_env();

/// Partition into n-2 C4-type factors plus one K4-type factor (num_vertices = 2n).
/// Even n is built algebraically. Odd n is found by backtracking search
/// (num_vertices <= 64) and cached. Throws TooSmall for n < 4 and
/// ConstructionNotFound when the search gives up.
FactorDecomposition c4_k4_decomposition(Vertex num_vertices,
                                        const DecompositionOptions& options = {});

/// Fallback: consecutive round-robin matchings paired, the last three grouped.
FactorDecomposition matching_pair_decomposition(Vertex num_vertices);

/// Throws Structure when the factor does not have its kind's shape.
std::vector<Matching> factor_one_factorization(const Factor& factor, Vertex num_vertices);

struct VerificationReport {
  bool passes = true;
  std::vector<Edge> missing;
  std::vector<Edge> duplicated;
  std::vector<std::string> violations;

  void add(std::string violation) {
    passes = false;
    violations.push_back(std::move(violation));
  }
};

VerificationReport verify_decomposition(Vertex num_vertices, const FactorDecomposition& d);
VerificationReport verify_decomposition(Vertex num_vertices, const OneFactorization& f);
/// Structural check of a single factor against its kind.
std::vector<std::string> check_factor_structure(const Factor& factor, Vertex num_vertices);

/// Image of an edge list / matching / factor under a vertex permutation.
std::vector<Edge> permute_edges(std::span<const Edge> edges, std::span<const Vertex> perm);
Matching permute(const Matching& m, std::span<const Vertex> perm);
Factor permute(const Factor& f, std::span<const Vertex> perm);

}  // namespace hidisc
