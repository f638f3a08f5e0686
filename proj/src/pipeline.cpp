#include "hidisc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "hidisc/serialize.hpp"

namespace hidisc {

using nlohmann::json;

std::string_view strategy_name(Strategy s) noexcept {
  switch (s) {
    case Strategy::C4K4: return "c4k4";
    case Strategy::MatchingPairs: return "matching_pairs";
    case Strategy::Auto: return "auto";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::C4K4, Strategy::MatchingPairs, Strategy::Auto}) {
    if (strategy_name(s) == name) return s;
  }
  fail(ErrorCode::InvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

std::string_view branch_name(Branch b) noexcept {
  switch (b) {
    case Branch::Balanced: return "balanced";
    case Branch::Boosted: return "boosted";
    case Branch::BothBest: return "both_best";
  }
  return "?";
}

PipelineConfig PipelineConfig::desk() { return PipelineConfig{}; }

PipelineConfig PipelineConfig::paper() {
  PipelineConfig c;
  const double eta = 1.0 / (8192.0 * 1e14);
  c.gamma = eta / 2e4;
  c.epsilon = c.gamma / 2;
  c.primary_target = 25 * c.gamma;
  c.final_target = 5 * c.gamma;
  c.preset = Preset::Paper;
  c.boost_mode = BoostMode::Paper;
  return c;
}

void PipelineConfig::validate() const {
  if (!(gamma > 0 && gamma < 1)) fail(ErrorCode::InvalidArgument, "gamma must lie in (0, 1)");
  if (!(epsilon >= 0 && epsilon < gamma)) {
    fail(ErrorCode::InvalidArgument, "epsilon must lie in [0, gamma)");
  }
  if (!(final_target > 0 && final_target <= primary_target)) {
    fail(ErrorCode::InvalidArgument, "targets need 0 < final <= primary");
  }
  if (max_trials == 0 || attempts == 0) {
    fail(ErrorCode::InvalidArgument, "max_trials and attempts must be >= 1");
  }
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void require_pipeline_graph(const SignedCompleteGraph& g) {
  const Vertex nv = g.num_vertices();
  if (nv < 4 || nv % 2 != 0) {
    fail(ErrorCode::InvalidArgument,
         "pipeline needs an even vertex count >= 4, got " + std::to_string(nv));
  }
}

// Fills the per-matching reports, the minimum, the status and the verification.
void finalize(const SignedCompleteGraph& g, const PipelineConfig& config, PipelineResult& r) {
  const auto n = static_cast<std::int64_t>(g.num_vertices() / 2);
  r.per_matching.clear();
  bool first = true;
  for (const Matching& m : r.one_factorization.matchings) {
    MatchingReport rep;
    rep.sum = signed_sum(g, m);
    rep.signed_disc = Rational(rep.sum, n);
    rep.abs_disc = rep.signed_disc.abs();
    rep.deviation = (rep.signed_disc - r.center).abs();
    if (first || rep.deviation < r.min_abs_disc) r.min_abs_disc = rep.deviation;
    first = false;
    r.per_matching.push_back(rep);
  }
  r.verification = verify_decomposition(g.num_vertices(), r.one_factorization);
  r.status = at_least(r.min_abs_disc, config.final_target) ? BoostStatus::Met
                                                           : BoostStatus::BestEffort;
}

bool better(const PipelineResult& a, const PipelineResult& b) {
  if (a.min_abs_disc != b.min_abs_disc) return a.min_abs_disc > b.min_abs_disc;
  return a.status == BoostStatus::Met && b.status != BoostStatus::Met;
}

PipelineResult run_balanced(const SignedCompleteGraph& g, const PipelineConfig& config) {
  const Vertex nv = g.num_vertices();
  const OneFactorization rr = round_robin(nv);
  PipelineResult r;
  r.branch = r.selected = Branch::Balanced;
  r.construction = "round_robin";
  r.seed = config.seed;
  r.attempts_run = 1;
  r.balance = find_balanced_permutation(g, rr, config.gamma / 2, config.max_trials,
                                        derive_seed(config.seed, 0));
  r.one_factorization.num_vertices = nv;
  for (const Matching& m : rr.matchings) {
    r.one_factorization.matchings.push_back(permute(m, r.balance.permutation));
  }
  finalize(g, config, r);
  if (r.status != BoostStatus::Met) {
    r.reason = r.balance.found
                   ? "balanced matchings reach min |disc| " + r.min_abs_disc.str() + " < target " +
                         fmt(config.final_target)
                   : "balancer exhausted after " + std::to_string(r.balance.trials_used) +
                         " trials (worst deviation " + r.balance.worst_deviation.str() +
                         " > " + fmt(config.gamma / 2) + ")";
  }
  return r;
}

FactorDecomposition build_decomposition(Vertex nv, const PipelineConfig& config,
                                        std::string& note) {
  auto options = config.decomposition;
  if (!options.cache_dir) options.cache_dir = cache_dir_from_env();
  switch (config.strategy) {
    case Strategy::MatchingPairs:
      return matching_pair_decomposition(nv);
    case Strategy::C4K4:
      return c4_k4_decomposition(nv, options);
    case Strategy::Auto:
      try {
        return c4_k4_decomposition(nv, options);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ConstructionNotFound && e.code() != ErrorCode::TooSmall) throw;
        note = e.what();
        return matching_pair_decomposition(nv);
      }
  }
  fail(ErrorCode::InvalidArgument, "unknown strategy");
}

// Greedy cross-matching improvement. Each accepted swap strictly improves the
// lexicographic objective (min deviation, -count at min), so it terminates.
void polish(const SignedCompleteGraph& g, std::vector<Matching>& ms, const Rational& center,
            SwapLog& log) {
  const auto n = static_cast<std::int64_t>(g.num_vertices() / 2);
  std::vector<std::int64_t> sum;
  for (const auto& m : ms) sum.push_back(signed_sum(g, m));
  const auto dev = [&](std::int64_t s) { return deviation(s, n, center); };
  const std::size_t k = ms.size();
  for (;;) {
    std::vector<Rational> d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = dev(sum[i]);
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    const Rational low = d[order[0]];
    std::vector<Rational> sorted = d;
    std::sort(sorted.begin(), sorted.end());
    const auto count_of = [&](const Rational& x) {
      const auto [lo, hi] = std::equal_range(sorted.begin(), sorted.end(), x);
      return static_cast<std::size_t>(hi - lo);
    };
    const std::size_t at_low = count_of(low);
    // Smallest deviation among matchings other than i and j.
    const auto rest_min = [&](std::size_t i, std::size_t j) -> std::optional<Rational> {
      for (std::size_t t : order) {
        if (t != i && t != j) return d[t];
      }
      return std::nullopt;
    };
    bool moved = false;
    for (std::size_t oi = 0; oi < k && !moved && d[order[oi]] == low; ++oi) {
      const std::size_t i = order[oi];
      for (std::size_t j = 0; j < k && !moved; ++j) {
        if (j == i) continue;
        const auto comps = alternating_components(ms[i], ms[j], g.num_vertices());
        const auto others = rest_min(i, j);
        for (const auto& c : comps) {
          if (!c.is_four_cycle()) continue;
          const auto& v = c.vertices;
          const std::int64_t in_i = g.sign(v[0], v[1]) + g.sign(v[2], v[3]);
          const std::int64_t in_j = g.sign(v[1], v[2]) + g.sign(v[3], v[0]);
          if (in_i == in_j) continue;
          const Rational di = dev(sum[i] - in_i + in_j);
          const Rational dj = dev(sum[j] - in_j + in_i);
          Rational new_low = std::min(di, dj);
          if (others) new_low = std::min(new_low, *others);
          std::size_t new_count = (di == new_low) + (dj == new_low);
          if (others && *others == new_low) {
            new_count += count_of(new_low) - (d[i] == new_low) - (d[j] == new_low);
          }
          if (new_low > low || (new_low == low && new_count < at_low)) {
            const FourCycle q = c.as_four_cycle();
            SwapRecord r;
            r.cycle = q;
            r.before_first = sum[i];
            r.before_second = sum[j];
            auto [a, b] = swap_switcher(ms[i], ms[j], q);
            ms[i] = std::move(a);
            ms[j] = std::move(b);
            sum[i] += in_j - in_i;
            sum[j] += in_i - in_j;
            r.after_first = sum[i];
            r.after_second = sum[j];
            r.first = static_cast<int>(i);
            r.second = static_cast<int>(j);
            r.stage = 0;
            log.push_back(r);
            moved = true;
            break;
          }
        }
      }
    }
    if (!moved) return;
  }
}

PipelineResult boosted_attempt(const SignedCompleteGraph& g, const PipelineConfig& config,
                               const FactorDecomposition& d, const Rational& center, Seed seed) {
  PipelineResult r;
  r.branch = r.selected = Branch::Boosted;
  r.construction = d.construction;
  r.center = center;
  r.balance = find_balanced_permutation(g, d, config.epsilon, config.max_trials, seed);
  r.one_factorization.num_vertices = g.num_vertices();

  std::vector<std::string> reasons;
  for (std::size_t i = 0; i < d.factors.size(); ++i) {
    const Factor f = permute(d.factors[i], r.balance.permutation);
    const auto parts = factor_one_factorization(f, g.num_vertices());
    BoostOutcome b = parts.size() == 2
                         ? boost_pair(g, parts[0], parts[1], config.final_target,
                                      config.boost_mode, center)
                         : boost_triple(g, parts[0], parts[1], parts[2], config.primary_target,
                                        config.final_target, center);
    for (auto& m : b.matchings) r.one_factorization.matchings.push_back(std::move(m));
    if (b.status != BoostStatus::Met) {
      reasons.push_back("factor " + std::to_string(i) + " (" +
                        std::string(factor_kind_name(f.kind)) + "): " + b.reason);
    }
    r.boosts.push_back({i, f.kind, b.status, std::move(b.reason), std::move(b.log)});
  }
  finalize(g, config, r);
  if (config.polish && r.status != BoostStatus::Met) {
    polish(g, r.one_factorization.matchings, center, r.polish);
    finalize(g, config, r);
    if (r.status == BoostStatus::Met) reasons.clear();
  }
  if (r.status != BoostStatus::Met) {
    r.reason = "min deviation " + r.min_abs_disc.str() + " < target " + fmt(config.final_target);
    // Keep the reason short: the first limiting factor is enough to act on.
    if (!reasons.empty()) {
      r.reason += "; " + reasons.front();
      if (reasons.size() > 1) r.reason += " (+" + std::to_string(reasons.size() - 1) + " more)";
    }
  }
  return r;
}

PipelineResult run_boosted(const SignedCompleteGraph& g, const PipelineConfig& config,
                           const Rational& center) {
  std::string note;
  const FactorDecomposition d = build_decomposition(g.num_vertices(), config, note);
  PipelineResult best;
  bool have = false;
  std::uint32_t a = 0;
  for (; a < config.attempts; ++a) {
    PipelineResult r = boosted_attempt(g, config, d, center, derive_seed(config.seed, a + 1));
    r.attempt = a;
    if (!have || better(r, best)) {
      best = std::move(r);
      have = true;
    }
    if (best.status == BoostStatus::Met) {
      ++a;
      break;
    }
  }
  best.attempts_run = a;
  best.seed = config.seed;
  if (!note.empty()) {
    best.construction += " (fallback: " + note + ")";
  }
  return best;
}

}  // namespace

PipelineResult decompose_high_discrepancy(const SignedCompleteGraph& g,
                                          const PipelineConfig& config) {
  config.validate();
  require_pipeline_graph(g);
  const Rational d = graph_discrepancy(g);
  const Rational ad = d.abs();
  PipelineResult result;
  if (!at_most(ad, config.gamma)) {
    result = run_balanced(g, config);
    const bool near = at_most(ad, 2 * config.gamma);
    if (config.strategy == Strategy::Auto && (near || result.status != BoostStatus::Met)) {
      PipelineResult other = run_boosted(g, config, Rational(0));
      if (better(other, result)) result = std::move(other);
      result.branch = Branch::BothBest;
    }
  } else {
    result = run_boosted(g, config, Rational(0));
  }
  result.graph_disc = d;
  return result;
}

PipelineResult decompose_unbalanced(const SignedCompleteGraph& g, const PipelineConfig& config,
                                    double p0) {
  config.validate();
  require_pipeline_graph(g);
  if (!(p0 > 0 && p0 <= 1)) fail(ErrorCode::InvalidArgument, "p0 must lie in (0, 1]");
  const Rational d = graph_discrepancy(g);
  if (!at_most(d.abs(), p0)) {
    fail(ErrorCode::Precondition, "|disc(K)| = " + d.abs().str() + " exceeds p0 = " + fmt(p0));
  }
  PipelineResult r = run_boosted(g, config, d);
  r.graph_disc = d;
  return r;
}

MulticolorResult multicolor_decompose(Vertex num_vertices, std::span<const std::uint32_t> colors,
                                      std::uint32_t k, const PipelineConfig& config) {
  if (k < 2) fail(ErrorCode::InvalidArgument, "need at least 2 colours, got " + std::to_string(k));
  if (colors.size() != choose2(num_vertices)) {
    fail(ErrorCode::InvalidArgument, "colouring has " + std::to_string(colors.size()) +
                                         " entries, expected " +
                                         std::to_string(choose2(num_vertices)));
  }
  std::vector<std::int8_t> signs(colors.size());
  for (std::size_t e = 0; e < colors.size(); ++e) {
    if (colors[e] < 1 || colors[e] > k) {
      const Edge ed = edge_at(e);
      fail(ErrorCode::InvalidArgument, "edge (" + std::to_string(ed.u) + "," +
                                           std::to_string(ed.v) + ") is uncoloured or out of range");
    }
    signs[e] = colors[e] == k ? -1 : 1;
  }
  const SignedCompleteGraph g(num_vertices, std::move(signs));
  MulticolorResult out;
  out.num_colors = k;
  // Two colours are already a signing; more go through the re-centered variant.
  out.pipeline = k == 2 ? decompose_high_discrepancy(g, config) : decompose_unbalanced(g, config, 1.0);
  const auto n = static_cast<std::int64_t>(num_vertices / 2);
  for (const Matching& m : out.pipeline.one_factorization.matchings) {
    ColorReport rep;
    rep.counts.assign(k, 0);
    for (const Edge& e : m.edges()) ++rep.counts[colors[edge_index(e, num_vertices)] - 1];
    const auto it = std::max_element(rep.counts.begin(), rep.counts.end());
    rep.dominant = static_cast<std::uint32_t>(it - rep.counts.begin()) + 1;
    rep.count = *it;
    rep.excess = Rational(static_cast<std::int64_t>(rep.count)) - Rational(n, k);
    out.per_matching.push_back(std::move(rep));
  }
  return out;
}

ResultClaims claims_of(const PipelineResult& r) {
  ResultClaims c;
  c.num_vertices = r.one_factorization.num_vertices;
  for (const auto& m : r.one_factorization.matchings) {
    c.matchings.emplace_back(m.edges().begin(), m.edges().end());
  }
  for (const auto& p : r.per_matching) c.signed_disc.push_back(p.signed_disc);
  c.min_abs_disc = r.min_abs_disc;
  c.center = r.center;
  return c;
}

VerificationReport verify_claims(const SignedCompleteGraph& g, const ResultClaims& c,
                                 const Rational& claimed_min) {
  VerificationReport rep;
  const Vertex nv = g.num_vertices();
  const auto edge_str = [](const Edge& e) {
    return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
  };
  if (c.num_vertices != nv) {
    rep.add("result has " + std::to_string(c.num_vertices) + " vertices, graph has " +
            std::to_string(nv));
    return rep;
  }
  if (c.matchings.size() != nv - 1) {
    rep.add("expected " + std::to_string(nv - 1) + " matchings, got " +
            std::to_string(c.matchings.size()));
  }
  if (c.signed_disc.size() != c.matchings.size()) {
    rep.add("claims list " + std::to_string(c.signed_disc.size()) + " discrepancies for " +
            std::to_string(c.matchings.size()) + " matchings");
  }
  std::vector<int> owner(choose2(nv), -1);
  std::vector<Edge> duplicated;
  const auto n = static_cast<std::int64_t>(nv / 2);
  std::optional<Rational> actual_min;
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < c.matchings.size(); ++i) {
    const auto& m = c.matchings[i];
    bool valid = true;
    std::vector<int> holder(nv, -1);
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const Edge& e = m[k];
      if (e.u == e.v || e.u >= nv || e.v >= nv) {
        rep.add("matching " + std::to_string(i) + " has invalid edge " + edge_str(e));
        valid = false;
        continue;
      }
      for (Vertex x : {e.u, e.v}) {
        if (holder[x] >= 0) {
          rep.add("matching " + std::to_string(i) + ": edges " + edge_str(m[holder[x]]) +
                  " and " + edge_str(e) + " share vertex " + std::to_string(x));
          valid = false;
        }
        holder[x] = static_cast<int>(k);
      }
      const EdgeIndex idx = edge_index(e, nv);
      if (owner[idx] >= 0) {
        rep.add("edge " + edge_str(e) + " is in matchings " + std::to_string(owner[idx]) +
                " and " + std::to_string(i));
        duplicated.push_back(make_edge(e.u, e.v));
      } else {
        owner[idx] = static_cast<int>(i);
      }
      sum += g.sign(idx);
    }
    if (m.size() != static_cast<std::size_t>(n)) {
      rep.add("matching " + std::to_string(i) + " has " + std::to_string(m.size()) +
              " edges, a perfect matching has " + std::to_string(n));
      valid = false;
    }
    if (!valid) continue;
    const Rational disc(sum, n);
    if (i < c.signed_disc.size() && c.signed_disc[i] != disc) {
      rep.add("matching " + std::to_string(i) + " claims disc " + c.signed_disc[i].str() +
              ", recomputed " + disc.str());
    }
    const Rational dev = (disc - c.center).abs();
    if (!actual_min || dev < *actual_min) {
      actual_min = dev;
      argmin = i;
    }
  }
  for (EdgeIndex e = 0; e < owner.size(); ++e) {
    if (owner[e] < 0) {
      rep.missing.push_back(edge_at(e));
      rep.add("edge " + edge_str(edge_at(e)) + " is in no matching");
    }
  }
  rep.duplicated = std::move(duplicated);
  if (actual_min) {
    if (*actual_min != c.min_abs_disc) {
      rep.add("claimed min " + c.min_abs_disc.str() + ", recomputed " + actual_min->str());
    }
    if (*actual_min < claimed_min) {
      rep.add("matching " + std::to_string(argmin) + " reaches only " + actual_min->str() +
              " < claimed min " + claimed_min.str());
    }
  }
  return rep;
}

VerificationReport verify_result(const SignedCompleteGraph& g, const PipelineResult& result,
                                 const Rational& claimed_min) {
  return verify_claims(g, claims_of(result), claimed_min);
}

json swap_log_to_json(const SwapLog& log) {
  json a = json::array();
  for (const auto& r : log) {
    a.push_back({{"stage", r.stage},
                 {"cycle", r.cycle.v},
                 {"matchings", {r.first, r.second}},
                 {"before", {r.before_first, r.before_second}},
                 {"after", {r.after_first, r.after_second}}});
  }
  return a;
}

json pipeline_result_to_json(const PipelineResult& r, bool explain) {
  json ms = json::array();
  for (std::size_t i = 0; i < r.one_factorization.matchings.size(); ++i) {
    const auto& p = r.per_matching[i];
    ms.push_back({{"edges", edges_to_json(r.one_factorization.matchings[i].edges())},
                  {"sum", p.sum},
                  {"disc", rational_to_json(p.signed_disc)},
                  {"abs_disc", rational_to_json(p.abs_disc)},
                  {"deviation", rational_to_json(p.deviation)}});
  }
  json boosts = json::array();
  for (const auto& b : r.boosts) {
    json bj{{"factor", b.factor},
            {"kind", std::string(factor_kind_name(b.kind))},
            {"status", b.status == BoostStatus::Met ? "met" : "best_effort"},
            {"swaps", b.log.size()}};
    if (!b.reason.empty()) bj["reason"] = b.reason;
    if (explain) bj["log"] = swap_log_to_json(b.log);
    boosts.push_back(std::move(bj));
  }
  json polish{{"swaps", r.polish.size()}};
  if (explain) polish["log"] = swap_log_to_json(r.polish);
  json balance{{"found", r.balance.found},
               {"trials_used", r.balance.trials_used},
               {"worst_deviation", rational_to_json(r.balance.worst_deviation)}};
  if (explain) balance["permutation"] = r.balance.permutation;
  json j{{"num_vertices", r.one_factorization.num_vertices},
         {"branch", std::string(branch_name(r.branch))},
         {"selected_branch", std::string(branch_name(r.selected))},
         {"status", r.status == BoostStatus::Met ? "met" : "best_effort"},
         {"construction", r.construction},
         {"graph_disc", rational_to_json(r.graph_disc)},
         {"center", rational_to_json(r.center)},
         {"min_abs_disc", rational_to_json(r.min_abs_disc)},
         {"min_abs_disc_value", r.min_abs_disc.to_double()},
         {"matchings", ms},
         {"balance", balance},
         {"boosts", boosts},
         {"polish", polish},
         {"verification", verification_to_json(r.verification)},
         {"seed", r.seed},
         {"attempt", r.attempt},
         {"attempts_run", r.attempts_run}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

ResultClaims claims_from_json(const json& j) {
  ResultClaims c;
  try {
    c.num_vertices = j.at("num_vertices").get<Vertex>();
    for (const auto& m : j.at("matchings")) {
      c.matchings.push_back(edges_from_json(m.at("edges")));
      c.signed_disc.push_back(rational_from_json(m.at("disc")));
    }
    c.min_abs_disc = rational_from_json(j.at("min_abs_disc"));
    c.center = j.contains("center") ? rational_from_json(j.at("center")) : Rational(0);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("pipeline result: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    fail(ErrorCode::Parse, std::string("pipeline result: ") + e.what());
  }
  return c;
}

json multicolor_to_json(const MulticolorResult& r, bool explain) {
  json j = pipeline_result_to_json(r.pipeline, explain);
  json per = json::array();
  for (const auto& c : r.per_matching) {
    per.push_back({{"dominant", c.dominant},
                   {"count", c.count},
                   {"excess", rational_to_json(c.excess)},
                   {"counts", c.counts}});
  }
  j["num_colors"] = r.num_colors;
  j["colors"] = per;
  return j;
}

}  // namespace hidisc
