#include "hidisc/boost.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <optional>
#include <string>

namespace hidisc {

namespace {

// A 4-cycle component of a ∪ b with the signed sums of its two halves.
struct Candidate {
  FourCycle cycle;
  std::int64_t in_a = 0;
  std::int64_t in_b = 0;
  std::int64_t delta() const { return in_a - in_b; }
  std::int64_t magnitude() const { return in_a > in_b ? in_a - in_b : in_b - in_a; }
};

struct Split {
  std::size_t components = 0;
  std::vector<Candidate> j1;  // a holds the larger half
  std::vector<Candidate> j2;
};

Split switcher_split(const SignedCompleteGraph& g, const Matching& a, const Matching& b) {
  Split s;
  const auto comps = alternating_components(a, b, g.num_vertices());
  s.components = comps.size();
  for (const auto& c : comps) {
    if (!c.is_four_cycle()) continue;
    const auto& v = c.vertices;
    Candidate cand;
    cand.cycle = c.as_four_cycle();
    cand.in_a = g.sign(v[0], v[1]) + g.sign(v[2], v[3]);
    cand.in_b = g.sign(v[1], v[2]) + g.sign(v[3], v[0]);
    if (cand.in_a > cand.in_b) s.j1.push_back(cand);
    else if (cand.in_a < cand.in_b) s.j2.push_back(cand);
  }
  return s;
}

// Largest |ΔS| first; the stable sort keeps canonical order among equals.
void order_by_gain(std::vector<Candidate>& c) {
  std::stable_sort(c.begin(), c.end(), [](const Candidate& x, const Candidate& y) {
    return x.magnitude() > y.magnitude();
  });
}

void require_perfect(const Matching& m, Vertex nv, const char* name) {
  if (!m.is_perfect(nv)) {
    fail(ErrorCode::InvalidArgument, std::string(name) + " is not a perfect matching");
  }
}

std::string fmt(double x) {
  std::string s = std::to_string(x);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string cycle_str(const FourCycle& q) {
  return "(" + std::to_string(q.v[0]) + "," + std::to_string(q.v[1]) + "," +
         std::to_string(q.v[2]) + "," + std::to_string(q.v[3]) + ")";
}

// Working state for a list of matchings under swaps.
struct Work {
  const SignedCompleteGraph& g;
  std::vector<Matching> m;
  std::vector<std::int64_t> sum;
  std::int64_t n;
  Rational center;
  SwapLog log;

  Rational dev(std::size_t i) const { return deviation(sum[i], n, center); }
  Rational dev_after(std::int64_t s) const { return deviation(s, n, center); }

  void apply(std::size_t a, std::size_t b, const Candidate& c, int stage) {
    SwapRecord r;
    r.cycle = c.cycle;
    r.before_first = sum[a];
    r.before_second = sum[b];
    auto [na, nb] = swap_switcher(m[a], m[b], c.cycle);
    m[a] = std::move(na);
    m[b] = std::move(nb);
    sum[a] += c.in_b - c.in_a;
    sum[b] += c.in_a - c.in_b;
    r.after_first = sum[a];
    r.after_second = sum[b];
    r.stage = stage;
    r.first = static_cast<int>(a);
    r.second = static_cast<int>(b);
    log.push_back(r);
  }
};

// Smallest prefix length k >= 1 of `side` after which pred(sa, sb) holds.
template <class Pred>
std::optional<std::size_t> shortest_prefix(const std::vector<Candidate>& side, std::int64_t sa,
                                           std::int64_t sb, Pred pred) {
  for (std::size_t k = 0; k < side.size(); ++k) {
    sa -= side[k].delta();
    sb += side[k].delta();
    if (pred(sa, sb)) return k + 1;
  }
  return std::nullopt;
}

constexpr std::size_t kExhaustiveLimit = 16;

// Fewest candidates of `side` whose swaps make pred(sa', sb') hold. Small sides
// are searched exhaustively (by size, then lowest mask in gain order); larger
// ones fall back to the gain-ordered prefix.
template <class Pred>
std::optional<std::vector<Candidate>> fewest_swaps(const std::vector<Candidate>& side,
                                                   std::int64_t sa, std::int64_t sb, Pred pred) {
  const std::size_t m = side.size();
  if (m <= kExhaustiveLimit) {
    std::optional<std::uint32_t> best;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      if (best && std::popcount(mask) >= std::popcount(*best)) continue;
      std::int64_t shift = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask >> i & 1u) shift += side[i].delta();
      }
      if (pred(sa - shift, sb + shift)) best = mask;
    }
    if (!best) return std::nullopt;
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < m; ++i) {
      if (*best >> i & 1u) out.push_back(side[i]);
    }
    return out;
  }
  auto k = shortest_prefix(side, sa, sb, pred);
  if (!k) return std::nullopt;
  return std::vector<Candidate>(side.begin(), side.begin() + static_cast<std::ptrdiff_t>(*k));
}

}  // namespace

Rational deviation(std::int64_t sum, std::int64_t n, const Rational& center) {
  return (Rational(sum, n) - center).abs();
}

std::pair<Matching, Matching> swap_switcher(const Matching& m1, const Matching& m2,
                                            const FourCycle& q) {
  const auto h1 = q.psi1();
  const auto h2 = q.psi2();
  const auto holds = [](const Matching& m, const std::array<Edge, 2>& h) {
    return m.contains(h[0]) && m.contains(h[1]);
  };
  std::array<Edge, 2> from1;
  std::array<Edge, 2> from2;
  if (holds(m1, h1) && holds(m2, h2)) {
    from1 = h1;
    from2 = h2;
  } else if (holds(m1, h2) && holds(m2, h1)) {
    from1 = h2;
    from2 = h1;
  } else {
    fail(ErrorCode::NotAComponent,
         "cycle " + cycle_str(q) + " does not alternate between the two matchings");
  }
  const auto rebuild = [](const Matching& m, const std::array<Edge, 2>& out,
                          const std::array<Edge, 2>& in) {
    std::vector<Edge> e;
    e.reserve(m.size());
    for (const Edge& x : m.edges()) {
      if (x != out[0] && x != out[1]) e.push_back(x);
    }
    e.push_back(in[0]);
    e.push_back(in[1]);
    return Matching(std::move(e));
  };
  return {rebuild(m1, from1, from2), rebuild(m2, from2, from1)};
}

BoostOutcome boost_pair(const SignedCompleteGraph& g, const Matching& m1, const Matching& m2,
                        double target, BoostMode mode, Rational center) {
  const Vertex nv = g.num_vertices();
  require_perfect(m1, nv, "m1");
  require_perfect(m2, nv, "m2");
  Work w{g, {m1, m2}, {signed_sum(g, m1), signed_sum(g, m2)}, nv / 2, center, {}};
  const auto meets = [&](std::int64_t a, std::int64_t b) {
    return at_least(w.dev_after(a), target) && at_least(w.dev_after(b), target);
  };

  BoostOutcome out;
  out.target = target;
  auto finish = [&](BoostOutcome& o) {
    o.matchings = std::move(w.m);
    o.achieved = {w.dev(0), w.dev(1)};
    o.log = std::move(w.log);
    return o;
  };

  // Overlap is reported even when nothing needs doing.
  Split split = switcher_split(g, m1, m2);
  out.components = split.components;
  out.switchers = split.j1.size() + split.j2.size();
  if (meets(w.sum[0], w.sum[1])) return finish(out);
  if (out.switchers == 0) {
    out.status = BoostStatus::BestEffort;
    out.reason = "no switchers";
    return finish(out);
  }

  const bool first_side = split.j1.size() >= split.j2.size();
  std::vector<Candidate>& side = first_side ? split.j1 : split.j2;
  std::vector<Candidate>& other = first_side ? split.j2 : split.j1;
  std::vector<const Candidate*> chosen;

  if (mode == BoostMode::Paper) {
    for (const auto& c : side) chosen.push_back(&c);
  } else {
    order_by_gain(side);
    order_by_gain(other);
    std::optional<std::size_t> k = shortest_prefix(side, w.sum[0], w.sum[1], meets);
    const std::vector<Candidate>* from = &side;
    if (!k) {
      k = shortest_prefix(other, w.sum[0], w.sum[1], meets);
      from = &other;
    }
    if (!k) {
      // Nothing reaches the target: keep the prefix with the best worse side.
      Rational best = std::min(w.dev(0), w.dev(1));
      std::size_t best_k = 0;
      from = &side;
      for (const auto* list : {&side, &other}) {
        std::int64_t a = w.sum[0], b = w.sum[1];
        for (std::size_t i = 0; i < list->size(); ++i) {
          a -= (*list)[i].delta();
          b += (*list)[i].delta();
          const Rational v = std::min(w.dev_after(a), w.dev_after(b));
          if (v > best) {
            best = v;
            best_k = i + 1;
            from = list;
          }
        }
      }
      k = best_k;
    }
    for (std::size_t i = 0; i < *k; ++i) chosen.push_back(&(*from)[i]);
  }

  for (const Candidate* c : chosen) w.apply(0, 1, *c, 0);
  if (!meets(w.sum[0], w.sum[1])) {
    out.status = BoostStatus::BestEffort;
    const Rational worst = std::min(w.dev(0), w.dev(1));
    out.reason = "m = " + std::to_string(out.switchers) + " switcher components (" +
                 std::to_string(chosen.size()) + " swapped) leave min deviation " + worst.str() +
                 " < target " + fmt(target);
  }
  return finish(out);
}

BoostOutcome boost_triple(const SignedCompleteGraph& g, const Matching& psi1,
                          const Matching& psi2, const Matching& psi3, double primary_target,
                          double final_target, Rational center) {
  if (primary_target < final_target) {
    fail(ErrorCode::InvalidArgument, "primary target must be >= final target");
  }
  const Vertex nv = g.num_vertices();
  require_perfect(psi1, nv, "psi1");
  require_perfect(psi2, nv, "psi2");
  require_perfect(psi3, nv, "psi3");
  Work w{g,
         {psi1, psi2, psi3},
         {signed_sum(g, psi1), signed_sum(g, psi2), signed_sum(g, psi3)},
         nv / 2,
         center,
         {}};
  // Pairwise disjointness is checked up front for all three pairs.
  switcher_split(g, psi1, psi2);
  switcher_split(g, psi1, psi3);
  switcher_split(g, psi2, psi3);

  std::vector<char> used(nv, 0);
  std::vector<FourCycle> used_cycles;
  BoostOutcome out;
  out.target = final_target;
  std::vector<std::string> notes;

  const auto reaches = [&](std::int64_t s, double t) { return at_least(w.dev_after(s), t); };

  // Drops candidates that share a vertex with a cycle swapped in an earlier stage.
  const auto disjoint = [&](std::vector<Candidate>& c) {
    std::erase_if(c, [&](const Candidate& x) {
      return std::any_of(x.cycle.v.begin(), x.cycle.v.end(), [&](Vertex v) { return used[v]; });
    });
  };
  const auto commit = [&](std::size_t a, std::size_t b, const std::vector<Candidate>& chosen,
                          int stage) {
    for (const auto& c : chosen) {
      const auto& q = c.cycle;
      for (const auto& prev : used_cycles) {
        for (Vertex v : q.v) {
          if (std::find(prev.v.begin(), prev.v.end(), v) != prev.v.end()) {
            fail(ErrorCode::StageCollision, "stage " + std::to_string(stage) + " cycle " +
                                                cycle_str(q) + " meets earlier cycle " +
                                                cycle_str(prev));
          }
        }
      }
    }
    for (const auto& c : chosen) {
      w.apply(a, b, c, stage);
      for (Vertex v : c.cycle.v) used[v] = 1;
      used_cycles.push_back(c.cycle);
    }
  };

  // Stage 1: psi1 against psi2, up to the primary target for psi1.
  if (!reaches(w.sum[0], primary_target)) {
    Split s = switcher_split(g, w.m[0], w.m[1]);
    out.components = s.components;
    out.switchers = s.j1.size() + s.j2.size();
    auto& side = s.j1.size() >= s.j2.size() ? s.j1 : s.j2;
    order_by_gain(side);
    auto chosen = fewest_swaps(side, w.sum[0], w.sum[1], [&](std::int64_t a, std::int64_t) {
      return reaches(a, primary_target);
    });
    if (!chosen) {
      notes.push_back("stage 1: " + std::to_string(side.size()) +
                      " one-sided switchers do not lift psi1 to " + fmt(primary_target));
      chosen = side;
    }
    commit(0, 1, *chosen, 1);
  }

  // Stage 2: psi2' against psi3 when psi2' is below the final target.
  if (!reaches(w.sum[1], final_target)) {
    Split s = switcher_split(g, w.m[1], w.m[2]);
    disjoint(s.j1);
    disjoint(s.j2);
    out.components = s.components;
    out.switchers = s.j1.size() + s.j2.size();
    auto& side = s.j1.size() >= s.j2.size() ? s.j1 : s.j2;
    order_by_gain(side);
    auto chosen = fewest_swaps(side, w.sum[1], w.sum[2], [&](std::int64_t a, std::int64_t b) {
      return reaches(a, final_target) && reaches(b, final_target);
    });
    if (!chosen) {
      chosen = fewest_swaps(side, w.sum[1], w.sum[2], [&](std::int64_t a, std::int64_t) {
        return reaches(a, final_target);
      });
    }
    if (!chosen) {
      notes.push_back("stage 2: " + std::to_string(side.size()) +
                      " disjoint one-sided switchers do not lift psi2 to " + fmt(final_target));
      chosen = side;
    }
    commit(1, 2, *chosen, 2);
  }

  // Stage 3: psi3' against psi1', fewest one-sided swaps putting both at the
  // final target.
  if (!reaches(w.sum[2], final_target)) {
    Split s = switcher_split(g, w.m[2], w.m[0]);
    disjoint(s.j1);
    disjoint(s.j2);
    out.components = s.components;
    out.switchers = s.j1.size() + s.j2.size();
    order_by_gain(s.j1);
    order_by_gain(s.j2);
    // j1 lowers psi3; prefer the direction that moves psi3 away from the center.
    const bool below = Rational(w.sum[2], w.n) <= center;
    auto& pref = below ? s.j1 : s.j2;
    auto& alt = below ? s.j2 : s.j1;
    const auto both = [&](std::int64_t a, std::int64_t b) {
      return reaches(a, final_target) && reaches(b, final_target);
    };
    auto cp = fewest_swaps(pref, w.sum[2], w.sum[0], both);
    auto ca = fewest_swaps(alt, w.sum[2], w.sum[0], both);
    if (cp && (!ca || cp->size() <= ca->size())) {
      commit(2, 0, *cp, 3);
    } else if (ca) {
      commit(2, 0, *ca, 3);
    } else {
      Rational best = std::min(w.dev(2), w.dev(0));
      std::size_t best_k = 0;
      std::vector<Candidate>* from = &pref;
      for (auto* list : {&pref, &alt}) {
        std::int64_t a = w.sum[2], b = w.sum[0];
        for (std::size_t i = 0; i < list->size(); ++i) {
          a -= (*list)[i].delta();
          b += (*list)[i].delta();
          const Rational v = std::min(w.dev_after(a), w.dev_after(b));
          if (v > best) {
            best = v;
            best_k = i + 1;
            from = list;
          }
        }
      }
      notes.push_back("stage 3: " + std::to_string(pref.size() + alt.size()) +
                      " disjoint switchers cannot put psi3 and psi1 both at " + fmt(final_target));
      commit(2, 0,
             std::vector<Candidate>(from->begin(),
                                    from->begin() + static_cast<std::ptrdiff_t>(best_k)),
             3);
    }
  }

  out.matchings = std::move(w.m);
  out.achieved = {w.dev(0), w.dev(1), w.dev(2)};
  out.log = std::move(w.log);
  const bool met = std::all_of(out.achieved.begin(), out.achieved.end(),
                               [&](const Rational& r) { return at_least(r, final_target); });
  if (!met) {
    out.status = BoostStatus::BestEffort;
    std::string r;
    for (const auto& n : notes) r += (r.empty() ? "" : "; ") + n;
    if (r.empty()) {
      for (int i = 0; i < 3; ++i) {
        if (!at_least(out.achieved[i], final_target)) {
          r = "psi" + std::to_string(i + 1) + " ends at " + out.achieved[i].str() +
              " < target " + fmt(final_target);
          break;
        }
      }
    }
    out.reason = r;
  }
  return out;
}

}  // namespace hidisc
