#include "hidisc/factorizations.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <variant>
#include <numeric>
#include <string>

#include "hidisc/serialize.hpp"
#include "odd_search.hpp"

namespace hidisc {

std::string_view factor_kind_name(FactorKind kind) noexcept {
  switch (kind) {
    case FactorKind::C4Factor: return "C4Factor";
    case FactorKind::K4Factor: return "K4Factor";
    case FactorKind::C4C6Factor: return "C4C6Factor";
    case FactorKind::K4K33Factor: return "K4K33Factor";
    case FactorKind::MatchingPair: return "MatchingPair";
    case FactorKind::MatchingTriple: return "MatchingTriple";
  }
  return "?";
}

FactorKind parse_factor_kind(std::string_view name) {
  for (FactorKind k : {FactorKind::C4Factor, FactorKind::K4Factor, FactorKind::C4C6Factor,
                       FactorKind::K4K33Factor, FactorKind::MatchingPair,
                       FactorKind::MatchingTriple}) {
    if (factor_kind_name(k) == name) return k;
  }
  fail(ErrorCode::Parse, "unknown factor kind '" + std::string(name) + "'");
}

std::size_t factor_matching_count(FactorKind kind) noexcept {
  switch (kind) {
    case FactorKind::K4Factor:
    case FactorKind::K4K33Factor:
    case FactorKind::MatchingTriple:
      return 3;
    default:
      return 2;
  }
}

OneFactorization round_robin(Vertex num_vertices) {
  if (num_vertices < 2 || num_vertices % 2 != 0) {
    fail(ErrorCode::InvalidArgument, "round robin needs an even vertex count >= 2, got " +
                                         std::to_string(num_vertices));
  }
  const Vertex m = num_vertices - 1;
  OneFactorization f{num_vertices, {}};
  f.matchings.reserve(m);
  for (Vertex i = 0; i < m; ++i) {
    std::vector<Edge> edges;
    edges.reserve(num_vertices / 2);
    edges.push_back(make_edge(m, i));
    for (Vertex j = 1; j < num_vertices / 2; ++j) {
      edges.push_back(make_edge((i + j) % m, (i + m - j) % m));
    }
    f.matchings.emplace_back(std::move(edges));
  }
  return f;
}

std::optional<std::filesystem::path> cache_dir_from_env() {
  const char* dir = std::getenv("HIDISC_CERT_CACHE");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

namespace {

// Even n: pair the 2n vertices into n halves {2h, 2h+1}. A 1-factorization of
// K_n on the halves has n-1 perfect matchings; one of them groups the halves
// into quadruples (the K4-factor), and every other half-matching blows up to
// a C4-factor, each half-edge {h, h'} becoming the K_{2,2} between them.
FactorDecomposition even_decomposition(Vertex num_vertices) {
  const Vertex n = num_vertices / 2;
  const OneFactorization halves = round_robin(n);
  // Relabel halves so the grouping matching pairs (2g, 2g+1).
  std::vector<Vertex> relabel(n);
  {
    Vertex next = 0;
    for (const Edge& e : halves.matchings.front().edges()) {
      relabel[e.u] = next++;
      relabel[e.v] = next++;
    }
  }
  FactorDecomposition d{num_vertices, {}, "algebraic"};
  for (std::size_t i = 1; i < halves.matchings.size(); ++i) {
    Factor f{FactorKind::C4Factor, {}, {}};
    for (const Edge& he : halves.matchings[i].edges()) {
      const Vertex h1 = relabel[he.u];
      const Vertex h2 = relabel[he.v];
      for (Vertex x : {2 * h1, 2 * h1 + 1}) {
        for (Vertex y : {2 * h2, 2 * h2 + 1}) f.edges.push_back(make_edge(x, y));
      }
    }
    std::sort(f.edges.begin(), f.edges.end());
    d.factors.push_back(std::move(f));
  }
  Factor k4{FactorKind::K4Factor, {}, {}};
  for (Vertex g = 0; g < n / 2; ++g) {
    for (Vertex a = 4 * g; a < 4 * g + 4; ++a) {
      for (Vertex b = a + 1; b < 4 * g + 4; ++b) k4.edges.push_back(Edge{a, b});
    }
  }
  d.factors.push_back(std::move(k4));
  return d;
}

std::filesystem::path certificate_path(const std::filesystem::path& dir, Vertex num_vertices) {
  return dir / ("c4k4_" + std::to_string(num_vertices) + ".json");
}

std::optional<FactorDecomposition> load_cached(const std::filesystem::path& dir,
                                               Vertex num_vertices) {
  const auto path = certificate_path(dir, num_vertices);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  FactorDecomposition d;
  try {
    d = decomposition_from_json(nlohmann::json::parse(in));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  // A cached certificate is only used after a full re-check.
  if (d.num_vertices != num_vertices || !verify_decomposition(num_vertices, d).passes) {
    return std::nullopt;
  }
  d.construction = "cache";
  return d;
}

void store_cached(const std::filesystem::path& dir, const FactorDecomposition& d) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream out(certificate_path(dir, d.num_vertices));
  if (out) out << decomposition_to_json(d).dump() << '\n';
}

}  // namespace

FactorDecomposition c4_k4_decomposition(Vertex num_vertices, const DecompositionOptions& options) {
  if (num_vertices % 2 != 0) {
    fail(ErrorCode::InvalidArgument, "vertex count must be even, got " + std::to_string(num_vertices));
  }
  const Vertex n = num_vertices / 2;
  if (n < 4) {
    fail(ErrorCode::TooSmall, "2n = " + std::to_string(num_vertices) + " has n < 4");
  }
  if (n % 2 == 0) return even_decomposition(num_vertices);

  if (options.cache_dir) {
    if (auto cached = load_cached(*options.cache_dir, num_vertices)) return *cached;
  }
  // The search is deterministic, so its outcome (found or not) is memoized per
  // process; repeated pipeline calls at the same size cost nothing.
  static std::mutex memo_mutex;
  static std::map<std::pair<Vertex, std::uint64_t>, std::variant<FactorDecomposition, std::string>>
      memo;
  const auto key = std::make_pair(num_vertices, options.search_node_budget);
  std::optional<FactorDecomposition> found;
  {
    std::lock_guard lock(memo_mutex);
    auto it = memo.find(key);
    if (it == memo.end()) {
      detail::OddSearchStats stats;
      auto result =
          detail::search_odd_decomposition(num_vertices, options.search_node_budget, stats);
      if (result) {
        it = memo.emplace(key, *result).first;
      } else {
        it = memo.emplace(key, "no C4/C6 resolution found for 2n = " +
                                   std::to_string(num_vertices) + " after " +
                                   std::to_string(stats.nodes) + " search nodes (" +
                                   stats.reason + ")")
                 .first;
      }
    }
    if (const auto* msg = std::get_if<std::string>(&it->second)) {
      fail(ErrorCode::ConstructionNotFound, *msg);
    }
    found = std::get<FactorDecomposition>(it->second);
  }
  const auto report = verify_decomposition(num_vertices, *found);
  if (!report.passes) {
    fail(ErrorCode::ConstructionNotFound,
         "search produced an invalid certificate: " +
             (report.violations.empty() ? std::string("partition") : report.violations.front()));
  }
  if (options.cache_dir) store_cached(*options.cache_dir, *found);
  return *found;
}

FactorDecomposition matching_pair_decomposition(Vertex num_vertices) {
  if (num_vertices < 4 || num_vertices % 2 != 0) {
    fail(ErrorCode::TooSmall, "matching-pair fallback needs an even vertex count >= 4");
  }
  OneFactorization rr = round_robin(num_vertices);
  FactorDecomposition d{num_vertices, {}, "matching_pairs"};
  const std::size_t m = rr.matchings.size();
  auto make = [&](FactorKind kind, std::size_t first, std::size_t count) {
    Factor f{kind, {}, {}};
    for (std::size_t i = first; i < first + count; ++i) {
      auto e = rr.matchings[i].edges();
      f.edges.insert(f.edges.end(), e.begin(), e.end());
      f.matchings.push_back(rr.matchings[i]);
    }
    std::sort(f.edges.begin(), f.edges.end());
    d.factors.push_back(std::move(f));
  };
  for (std::size_t i = 0; i + 3 < m; i += 2) make(FactorKind::MatchingPair, i, 2);
  make(FactorKind::MatchingTriple, m - 3, 3);
  return d;
}

namespace {

struct FactorGraph {
  std::vector<std::vector<Vertex>> adj;
  std::vector<std::vector<Vertex>> components;  // each sorted
};

FactorGraph build_factor_graph(std::span<const Edge> edges, Vertex num_vertices) {
  FactorGraph g;
  g.adj.assign(num_vertices, {});
  for (const Edge& e : edges) {
    if (e.v >= num_vertices || e.u >= e.v) fail(ErrorCode::Structure, "edge out of range");
    g.adj[e.u].push_back(e.v);
    g.adj[e.v].push_back(e.u);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  std::vector<char> seen(num_vertices, 0);
  for (Vertex s = 0; s < num_vertices; ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (Vertex w : g.adj[comp[i]]) {
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    g.components.push_back(std::move(comp));
  }
  return g;
}

bool is_bipartite_component(const FactorGraph& g, const std::vector<Vertex>& comp,
                            std::vector<Vertex>* side_a, std::vector<Vertex>* side_b) {
  std::map<Vertex, int> color;
  color[comp.front()] = 0;
  std::vector<Vertex> queue{comp.front()};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const Vertex x = queue[i];
    for (Vertex y : g.adj[x]) {
      auto it = color.find(y);
      if (it == color.end()) {
        color[y] = 1 - color[x];
        queue.push_back(y);
      } else if (it->second == color[x]) {
        return false;
      }
    }
  }
  if (side_a && side_b) {
    for (auto [v, c] : color) (c == 0 ? side_a : side_b)->push_back(v);
  }
  return true;
}

std::vector<std::string> check_hint_matchings(const Factor& f, Vertex num_vertices) {
  std::vector<std::string> out;
  if (f.matchings.size() != factor_matching_count(f.kind)) {
    out.push_back(std::string(factor_kind_name(f.kind)) + " carries " +
                  std::to_string(f.matchings.size()) + " matchings, expected " +
                  std::to_string(factor_matching_count(f.kind)));
    return out;
  }
  std::vector<Edge> all;
  for (std::size_t i = 0; i < f.matchings.size(); ++i) {
    if (!f.matchings[i].is_perfect(num_vertices)) {
      out.push_back("carried matching " + std::to_string(i) + " is not perfect");
    }
    auto e = f.matchings[i].edges();
    all.insert(all.end(), e.begin(), e.end());
  }
  std::sort(all.begin(), all.end());
  if (all != f.edges) out.push_back("carried matchings do not partition the factor edges");
  return out;
}

}  // namespace

std::vector<std::string> check_factor_structure(const Factor& f, Vertex num_vertices) {
  std::vector<std::string> out;
  const std::string name(factor_kind_name(f.kind));
  if (!std::is_sorted(f.edges.begin(), f.edges.end()) ||
      std::adjacent_find(f.edges.begin(), f.edges.end()) != f.edges.end()) {
    out.push_back(name + ": edge list not sorted and duplicate-free");
    return out;
  }
  FactorGraph g;
  try {
    g = build_factor_graph(f.edges, num_vertices);
  } catch (const Error& e) {
    out.push_back(name + ": " + e.what());
    return out;
  }
  const std::size_t degree = factor_matching_count(f.kind);
  for (Vertex v = 0; v < num_vertices; ++v) {
    if (g.adj[v].size() != degree) {
      out.push_back(name + ": vertex " + std::to_string(v) + " has degree " +
                    std::to_string(g.adj[v].size()) + ", expected " + std::to_string(degree));
      return out;
    }
  }
  std::size_t size4 = 0, size6 = 0, other = 0, odd = 0;
  for (const auto& c : g.components) {
    if (c.size() == 4) ++size4;
    else if (c.size() == 6) ++size6;
    else ++other;
    if (c.size() % 2 != 0) ++odd;
  }
  switch (f.kind) {
    case FactorKind::C4Factor:
    case FactorKind::K4Factor:
      // 2-regular on 4 vertices is C4; 3-regular on 4 vertices is K4.
      if (size6 + other > 0) out.push_back(name + ": component of size other than 4");
      break;
    case FactorKind::C4C6Factor:
      if (size6 != 1 || other != 0) {
        out.push_back(name + ": expected 4-cycles and exactly one 6-cycle");
      }
      break;
    case FactorKind::K4K33Factor:
      if (size6 != 1 || other != 0) {
        out.push_back(name + ": expected K4's and exactly one K33");
      } else {
        for (const auto& c : g.components) {
          if (c.size() == 6 && !is_bipartite_component(g, c, nullptr, nullptr)) {
            out.push_back(name + ": 6-vertex component is not K33");
          }
        }
      }
      break;
    case FactorKind::MatchingPair:
      if (odd > 0) out.push_back(name + ": odd cycle component");
      break;
    case FactorKind::MatchingTriple:
      if (f.matchings.empty()) out.push_back(name + ": carries no matchings");
      break;
  }
  if (!f.matchings.empty()) {
    auto hint = check_hint_matchings(f, num_vertices);
    for (auto& h : hint) out.push_back(name + ": " + h);
  }
  return out;
}

std::vector<Matching> factor_one_factorization(const Factor& f, Vertex num_vertices) {
  const auto problems = check_factor_structure(f, num_vertices);
  if (!problems.empty()) fail(ErrorCode::Structure, problems.front());
  if (f.kind == FactorKind::MatchingTriple) return f.matchings;

  const FactorGraph g = build_factor_graph(f.edges, num_vertices);
  const std::size_t count = factor_matching_count(f.kind);
  std::vector<std::vector<Edge>> parts(count);
  for (const auto& comp : g.components) {
    if (count == 2) {
      // Walk the cycle from its minimum vertex towards the smaller neighbour,
      // alternating edges between the two matchings.
      Vertex prev = comp.front();
      Vertex cur = g.adj[prev][0];
      std::size_t k = 0;
      parts[k].push_back(make_edge(prev, cur));
      while (cur != comp.front()) {
        const Vertex next = g.adj[cur][0] == prev ? g.adj[cur][1] : g.adj[cur][0];
        k ^= 1;
        parts[k].push_back(make_edge(cur, next));
        prev = cur;
        cur = next;
      }
    } else if (comp.size() == 4) {
      const Vertex a = comp[0], b = comp[1], c = comp[2], d = comp[3];
      parts[0].insert(parts[0].end(), {Edge{a, b}, Edge{c, d}});
      parts[1].insert(parts[1].end(), {Edge{a, c}, Edge{b, d}});
      parts[2].insert(parts[2].end(), {Edge{a, d}, Edge{b, c}});
    } else {
      std::vector<Vertex> s, t;
      is_bipartite_component(g, comp, &s, &t);
      for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t i = 0; i < 3; ++i) parts[r].push_back(make_edge(s[i], t[(i + r) % 3]));
      }
    }
  }
  std::vector<Matching> out;
  for (auto& p : parts) out.emplace_back(std::move(p));
  return out;
}

namespace {

void check_partition(Vertex num_vertices, const std::vector<std::span<const Edge>>& parts,
                     VerificationReport& report) {
  std::vector<std::uint32_t> hits(choose2(num_vertices), 0);
  for (const auto& part : parts) {
    for (const Edge& e : part) {
      if (e.u >= e.v || e.v >= num_vertices) {
        report.add("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
        continue;
      }
      ++hits[edge_index(e, num_vertices)];
    }
  }
  for (EdgeIndex i = 0; i < hits.size(); ++i) {
    if (hits[i] == 0) report.missing.push_back(edge_at(i));
    if (hits[i] > 1) report.duplicated.push_back(edge_at(i));
  }
  if (!report.missing.empty() || !report.duplicated.empty()) {
    report.add(std::to_string(report.missing.size()) + " missing and " +
               std::to_string(report.duplicated.size()) + " duplicated edges");
  }
}

}  // namespace

VerificationReport verify_decomposition(Vertex num_vertices, const FactorDecomposition& d) {
  VerificationReport report;
  if (d.num_vertices != num_vertices) report.add("vertex count mismatch");
  std::vector<std::span<const Edge>> parts;
  for (const auto& f : d.factors) parts.emplace_back(f.edges);
  check_partition(num_vertices, parts, report);
  for (std::size_t i = 0; i < d.factors.size(); ++i) {
    for (auto& v : check_factor_structure(d.factors[i], num_vertices)) {
      report.add("factor " + std::to_string(i) + ": " + v);
    }
  }
  return report;
}

VerificationReport verify_decomposition(Vertex num_vertices, const OneFactorization& f) {
  VerificationReport report;
  if (f.num_vertices != num_vertices) report.add("vertex count mismatch");
  if (num_vertices >= 2 && f.matchings.size() != num_vertices - 1) {
    report.add("expected " + std::to_string(num_vertices - 1) + " matchings, got " +
               std::to_string(f.matchings.size()));
  }
  std::vector<std::span<const Edge>> parts;
  for (std::size_t i = 0; i < f.matchings.size(); ++i) {
    if (!f.matchings[i].is_perfect(num_vertices)) {
      report.add("matching " + std::to_string(i) + " is not perfect");
    }
    parts.push_back(f.matchings[i].edges());
  }
  check_partition(num_vertices, parts, report);
  return report;
}

std::vector<Edge> permute_edges(std::span<const Edge> edges, std::span<const Vertex> perm) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const Edge& e : edges) out.push_back(make_edge(perm[e.u], perm[e.v]));
  std::sort(out.begin(), out.end());
  return out;
}

Matching permute(const Matching& m, std::span<const Vertex> perm) {
  return Matching(permute_edges(m.edges(), perm));
}

Factor permute(const Factor& f, std::span<const Vertex> perm) {
  Factor out{f.kind, permute_edges(f.edges, perm), {}};
  for (const auto& m : f.matchings) out.matchings.push_back(permute(m, perm));
  return out;
}

}  // namespace hidisc
