#include "hidisc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <climits>

#include "hidisc/serialize.hpp"

namespace hidisc {

namespace {

struct Enumerator {
  const SignedCompleteGraph& g;
  Vertex nv;
  std::uint64_t used_edges = 0;
  std::vector<std::vector<Edge>> current;
  std::vector<std::int64_t> sums;
  std::uint64_t count = 0;
  std::int64_t best = -1;
  std::vector<std::vector<Edge>> witness;

  // Extends matching j (which already holds {0, j}) one edge at a time.
  void extend(Vertex j, std::uint32_t covered) {
    const std::uint32_t full = (1u << nv) - 1;
    if (covered == full) {
      if (j + 1 == nv) {
        leaf();
      } else {
        start(j + 1);
      }
      return;
    }
    const Vertex u = static_cast<Vertex>(std::countr_one(covered));
    for (Vertex v = u + 1; v < nv; ++v) {
      if (covered & (1u << v)) continue;
      const EdgeIndex e = edge_index(u, v, nv);
      if (used_edges & (1ull << e)) continue;
      used_edges |= 1ull << e;
      current[j - 1].push_back(Edge{u, v});
      sums[j - 1] += g.sign(e);
      extend(j, covered | (1u << u) | (1u << v));
      sums[j - 1] -= g.sign(e);
      current[j - 1].pop_back();
      used_edges &= ~(1ull << e);
    }
  }

  void start(Vertex j) {
    const EdgeIndex e = edge_index(0, j, nv);
    used_edges |= 1ull << e;
    current[j - 1] = {Edge{0, j}};
    sums[j - 1] = g.sign(e);
    extend(j, 1u | (1u << j));
    used_edges &= ~(1ull << e);
    current[j - 1].clear();
  }

  void leaf() {
    ++count;
    std::int64_t worst = INT64_MAX;
    for (auto s : sums) worst = std::min(worst, s < 0 ? -s : s);
    if (worst > best) {
      best = worst;
      witness = current;
    }
  }
};

}  // namespace

OracleResult brute_force_oracle(const SignedCompleteGraph& g) {
  const Vertex nv = g.num_vertices();
  if (nv > 8) {
    fail(ErrorCode::SizeLimit, "oracle enumerates at most 8 vertices, got " + std::to_string(nv));
  }
  if (nv < 4 || nv % 2 != 0) {
    fail(ErrorCode::InvalidArgument, "oracle needs 4, 6 or 8 vertices, got " + std::to_string(nv));
  }
  Enumerator en{g, nv, 0, std::vector<std::vector<Edge>>(nv - 1),
                std::vector<std::int64_t>(nv - 1, 0), 0, -1, {}};
  en.start(1);

  OracleResult r;
  r.factorizations_enumerated = en.count;
  r.optimum = Rational(en.best, nv / 2);
  r.witness.num_vertices = nv;
  for (auto& m : en.witness) r.witness.matchings.emplace_back(std::move(m));
  return r;
}

nlohmann::json oracle_to_json(const OracleResult& r) {
  return {{"optimum", rational_to_json(r.optimum)},
          {"optimum_value", r.optimum.to_double()},
          {"factorizations_enumerated", r.factorizations_enumerated},
          {"witness", factorization_to_json(r.witness)}};
}

}  // namespace hidisc
