#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "hidisc/signed_graph.hpp"

namespace testing_support {

using hidisc::Edge;
using hidisc::Vertex;

inline std::vector<Edge> edges(std::initializer_list<std::pair<Vertex, Vertex>> list) {
  std::vector<Edge> out;
  for (auto [a, b] : list) out.push_back(hidisc::make_edge(a, b));
  return out;
}

inline hidisc::Matching matching(std::initializer_list<std::pair<Vertex, Vertex>> list) {
  return hidisc::Matching(edges(list));
}

inline hidisc::SignedCompleteGraph with_negatives(
    Vertex nv, std::initializer_list<std::pair<Vertex, Vertex>> list) {
  return hidisc::generate_signing(nv, hidisc::signing::FromEdgeList{edges(list)}, 0);
}

inline hidisc::SignedCompleteGraph random_graph(Vertex nv, double p, hidisc::Seed seed) {
  return hidisc::generate_signing(nv, hidisc::signing::Biased{p}, seed);
}

}  // namespace testing_support
