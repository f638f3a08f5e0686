#include "odd_search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <vector>

namespace hidisc::detail {
namespace {

using Mask = std::uint64_t;

inline Mask bit(Vertex v) { return Mask{1} << v; }

// Fixed final factor: K4 on each block {4g..4g+3} and K_{3,3} on the last six
// vertices with sides {N-6, N-5, N-4} and {N-3, N-2, N-1}. The remaining graph
// is (2n-4)-regular and must split into n-2 spanning subgraphs, each a union
// of (n-3)/2 4-cycles and one 6-cycle.
class OddSearch {
 public:
  OddSearch(Vertex num_vertices, std::uint64_t budget)
      : nv_(num_vertices), n_(num_vertices / 2), budget_(budget), adj_(num_vertices, 0) {
    const Mask all = nv_ == 64 ? ~Mask{0} : (bit(nv_) - 1);
    for (Vertex v = 0; v < nv_; ++v) adj_[v] = all & ~bit(v);
    const Vertex blocks = (n_ - 3) / 2;
    for (Vertex g = 0; g < blocks; ++g) {
      for (Vertex a = 4 * g; a < 4 * g + 4; ++a) {
        for (Vertex b = a + 1; b < 4 * g + 4; ++b) remove(a, b);
      }
    }
    for (Vertex s = nv_ - 6; s < nv_ - 3; ++s) {
      for (Vertex t = nv_ - 3; t < nv_; ++t) remove(s, t);
    }
    all_ = all;
  }

  bool run() { return fill(0, all_, false); }

  std::uint64_t nodes() const { return nodes_; }
  bool exhausted_budget() const { return nodes_ >= budget_; }

  FactorDecomposition result() const {
    FactorDecomposition d{nv_, {}, "search"};
    for (const auto& cycles : factors_) {
      Factor f{FactorKind::C4C6Factor, {}, {}};
      for (const auto& cyc : cycles) {
        for (std::size_t i = 0; i < cyc.size(); ++i) {
          f.edges.push_back(make_edge(cyc[i], cyc[(i + 1) % cyc.size()]));
        }
      }
      std::sort(f.edges.begin(), f.edges.end());
      d.factors.push_back(std::move(f));
    }
    Factor last{FactorKind::K4K33Factor, {}, {}};
    const Vertex blocks = (n_ - 3) / 2;
    for (Vertex g = 0; g < blocks; ++g) {
      for (Vertex a = 4 * g; a < 4 * g + 4; ++a) {
        for (Vertex b = a + 1; b < 4 * g + 4; ++b) last.edges.push_back(Edge{a, b});
      }
    }
    for (Vertex s = nv_ - 6; s < nv_ - 3; ++s) {
      for (Vertex t = nv_ - 3; t < nv_; ++t) last.edges.push_back(Edge{s, t});
    }
    std::sort(last.edges.begin(), last.edges.end());
    d.factors.push_back(std::move(last));
    return d;
  }

 private:
  using Cycle = std::vector<Vertex>;

  void remove(Vertex a, Vertex b) {
    adj_[a] &= ~bit(b);
    adj_[b] &= ~bit(a);
  }
  void restore(Vertex a, Vertex b) {
    adj_[a] |= bit(b);
    adj_[b] |= bit(a);
  }
  void take(const Cycle& c) {
    for (std::size_t i = 0; i < c.size(); ++i) remove(c[i], c[(i + 1) % c.size()]);
  }
  void give_back(const Cycle& c) {
    for (std::size_t i = 0; i < c.size(); ++i) restore(c[i], c[(i + 1) % c.size()]);
  }

  // Every uncovered vertex still needs two residual edges inside `uncovered`.
  bool viable(Mask uncovered) const {
    for (Mask m = uncovered; m; m &= m - 1) {
      const Vertex u = static_cast<Vertex>(std::countr_zero(m));
      if (std::popcount(adj_[u] & uncovered) < 2) return false;
    }
    return true;
  }

  bool place(const Cycle& c, std::size_t factor, Mask uncovered, bool c6_used) {
    Mask covered = 0;
    for (Vertex x : c) covered |= bit(x);
    take(c);
    current_.push_back(c);
    const Mask rest = uncovered & ~covered;
    bool ok = viable(rest) && fill(factor, rest, c6_used || c.size() == 6);
    if (!ok) {
      current_.pop_back();
      give_back(c);
    }
    return ok;
  }

  bool fill(std::size_t factor, Mask uncovered, bool c6_used) {
    if (++nodes_ >= budget_) return false;
    if (uncovered == 0) {
      factors_.push_back(current_);
      current_.clear();
      if (factor + 1 == n_ - 2) return true;
      if (fill(factor + 1, all_, false)) return true;
      current_ = factors_.back();
      factors_.pop_back();
      return false;
    }
    const int left = std::popcount(uncovered);
    // Most constrained uncovered vertex; a fresh factor always starts at 0
    // and must use 0's smallest residual neighbour, which orders the factors.
    Vertex v = 0;
    bool fresh = uncovered == all_;
    if (!fresh) {
      int best = 65;
      for (Mask m = uncovered; m; m &= m - 1) {
        const Vertex u = static_cast<Vertex>(std::countr_zero(m));
        const int d = std::popcount(adj_[u] & uncovered);
        if (d < best) {
          best = d;
          v = u;
        }
      }
    }
    const Mask nbr = adj_[v] & uncovered;
    const Mask forced = fresh ? (nbr & (~nbr + 1)) : 0;

    const bool allow_c4 = c6_used ? left >= 4 : left >= 10;
    const bool allow_c6 = !c6_used && left >= 6;

    for (Mask ma = nbr; ma; ma &= ma - 1) {
      const Vertex a = static_cast<Vertex>(std::countr_zero(ma));
      // partner c (or e) > a, so each cycle is tried in one orientation.
      for (Mask mc = nbr & ~(bit(a + 1) - 1) & ~bit(a); mc; mc &= mc - 1) {
        const Vertex c = static_cast<Vertex>(std::countr_zero(mc));
        if (forced && !(forced & (bit(a) | bit(c)))) continue;
        const Mask inner = uncovered & ~bit(v) & ~bit(a) & ~bit(c);
        if (allow_c4) {
          for (Mask mb = adj_[a] & adj_[c] & inner; mb; mb &= mb - 1) {
            const Vertex b = static_cast<Vertex>(std::countr_zero(mb));
            if (place({v, a, b, c}, factor, uncovered, c6_used)) return true;
            if (nodes_ >= budget_) return false;
          }
        }
        if (allow_c6) {
          // v - a - b - x - d - c - v
          for (Mask mb = adj_[a] & inner; mb; mb &= mb - 1) {
            const Vertex b = static_cast<Vertex>(std::countr_zero(mb));
            for (Mask md = adj_[c] & inner & ~bit(b); md; md &= md - 1) {
              const Vertex d = static_cast<Vertex>(std::countr_zero(md));
              for (Mask mx = adj_[b] & adj_[d] & inner & ~bit(b) & ~bit(d); mx; mx &= mx - 1) {
                const Vertex x = static_cast<Vertex>(std::countr_zero(mx));
                if (place({v, a, b, x, d, c}, factor, uncovered, c6_used)) return true;
                if (nodes_ >= budget_) return false;
              }
            }
          }
        }
      }
    }
    return false;
  }

  Vertex nv_;
  Vertex n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  Mask all_ = 0;
  std::vector<Mask> adj_;
  std::vector<Cycle> current_;
  std::vector<std::vector<Cycle>> factors_;
};

}  // namespace

std::optional<FactorDecomposition> search_odd_decomposition(Vertex num_vertices,
                                                            std::uint64_t node_budget,
                                                            OddSearchStats& stats) {
  if (num_vertices > 64) {
    stats.reason = "search limited to 64 vertices";
    return std::nullopt;
  }
  OddSearch search(num_vertices, node_budget);
  const bool found = search.run();
  stats.nodes = search.nodes();
  if (!found) {
    stats.reason = search.exhausted_budget() ? "node budget exhausted" : "search space exhausted";
    return std::nullopt;
  }
  return search.result();
}

}  // namespace hidisc::detail
