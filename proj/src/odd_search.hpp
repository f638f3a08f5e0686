#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hidisc/factorizations.hpp"

namespace hidisc::detail {

struct OddSearchStats {
  std::uint64_t nodes = 0;
  std::string reason;
};

/// Backtracking search for the odd-n factor shape on at most 64 vertices.
std::optional<FactorDecomposition> search_odd_decomposition(Vertex num_vertices,
                                                            std::uint64_t node_budget,
                                                            OddSearchStats& stats);

}  // namespace hidisc::detail
