#include "hidisc/serialize.hpp"

#include <sstream>

namespace hidisc {

using nlohmann::json;

namespace {

template <class T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    fail(ErrorCode::Parse, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("field '") + key + "': " + e.what());
  }
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

json edges_to_json(std::span<const Edge> edges) {
  json a = json::array();
  for (const Edge& e : edges) a.push_back({e.u, e.v});
  return a;
}

std::vector<Edge> edges_from_json(const json& j) {
  if (!j.is_array()) fail(ErrorCode::Parse, "edge list must be an array");
  std::vector<Edge> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned()) {
      fail(ErrorCode::Parse, "edge must be a pair of vertex ids: " + e.dump());
    }
    const auto u = e[0].get<std::uint64_t>();
    const auto v = e[1].get<std::uint64_t>();
    if (u > UINT32_MAX || v > UINT32_MAX) fail(ErrorCode::Parse, "vertex id too large");
    out.push_back(make_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)));
  }
  return out;
}

json signing_to_json(const SignedCompleteGraph& g, SigningForm form) {
  json j;
  j["num_vertices"] = g.num_vertices();
  if (form == SigningForm::Signs) {
    std::string s;
    s.reserve(g.num_edges());
    for (auto x : g.signs()) s.push_back(x > 0 ? '+' : '-');
    j["signs"] = s;
  } else {
    std::vector<Edge> neg;
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
      if (g.sign(e) < 0) neg.push_back(edge_at(e));
    }
    std::sort(neg.begin(), neg.end());
    j["negative_edges"] = edges_to_json(neg);
  }
  return j;
}

SignedCompleteGraph signing_from_json(const json& j) {
  const auto nv64 = get_field<std::uint64_t>(j, "num_vertices");
  if (nv64 < 2 || nv64 > 1u << 16) fail(ErrorCode::Parse, "num_vertices out of range");
  const auto nv = static_cast<Vertex>(nv64);
  const bool has_signs = j.contains("signs");
  const bool has_neg = j.contains("negative_edges");
  if (has_signs == has_neg) {
    fail(ErrorCode::Parse, "need exactly one of 'signs' or 'negative_edges'");
  }
  if (has_signs) {
    const auto s = get_field<std::string>(j, "signs");
    if (s.size() != choose2(nv)) {
      fail(ErrorCode::Parse, "signs has length " + std::to_string(s.size()) + ", expected " +
                                 std::to_string(choose2(nv)));
    }
    std::vector<std::int8_t> signs(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '+') signs[i] = 1;
      else if (s[i] == '-') signs[i] = -1;
      else fail(ErrorCode::Parse, "bad sign character at " + std::to_string(i));
    }
    return SignedCompleteGraph(nv, std::move(signs));
  }
  std::vector<Edge> neg;
  try {
    neg = edges_from_json(j.at("negative_edges"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidEdge) fail(ErrorCode::Parse, e.what());
    throw;
  }
  for (const Edge& e : neg) {
    if (e.v >= nv) fail(ErrorCode::Parse, "negative edge out of range");
  }
  return generate_signing(nv, signing::FromEdgeList{std::move(neg)}, 0);
}

json decomposition_to_json(const FactorDecomposition& d) {
  json j;
  j["num_vertices"] = d.num_vertices;
  if (!d.construction.empty()) j["construction"] = d.construction;
  json factors = json::array();
  for (const Factor& f : d.factors) {
    json fj;
    fj["kind"] = std::string(factor_kind_name(f.kind));
    fj["edges"] = edges_to_json(f.edges);
    if (!f.matchings.empty()) {
      json ms = json::array();
      for (const auto& m : f.matchings) ms.push_back(edges_to_json(m.edges()));
      fj["matchings"] = ms;
    }
    factors.push_back(std::move(fj));
  }
  j["factors"] = std::move(factors);
  return j;
}

FactorDecomposition decomposition_from_json(const json& j) {
  FactorDecomposition d;
  d.num_vertices = get_field<Vertex>(j, "num_vertices");
  if (j.contains("construction")) d.construction = get_field<std::string>(j, "construction");
  const auto& factors = j.contains("factors") ? j.at("factors") : json();
  if (!factors.is_array()) fail(ErrorCode::Parse, "'factors' must be an array");
  for (const auto& fj : factors) {
    Factor f;
    f.kind = parse_factor_kind(get_field<std::string>(fj, "kind"));
    f.edges = edges_from_json(fj.at("edges"));
    std::sort(f.edges.begin(), f.edges.end());
    if (fj.contains("matchings")) {
      for (const auto& mj : fj.at("matchings")) f.matchings.emplace_back(edges_from_json(mj));
    }
    d.factors.push_back(std::move(f));
  }
  return d;
}

json factorization_to_json(const OneFactorization& f) {
  json ms = json::array();
  for (const auto& m : f.matchings) ms.push_back(edges_to_json(m.edges()));
  return {{"num_vertices", f.num_vertices}, {"matchings", ms}};
}

OneFactorization factorization_from_json(const json& j) {
  OneFactorization f;
  f.num_vertices = get_field<Vertex>(j, "num_vertices");
  const auto& ms = j.contains("matchings") ? j.at("matchings") : json();
  if (!ms.is_array()) fail(ErrorCode::Parse, "'matchings' must be an array");
  for (const auto& mj : ms) {
    try {
      f.matchings.emplace_back(edges_from_json(mj));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Parse) throw;
      fail(ErrorCode::Parse, e.what());
    }
  }
  return f;
}

json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) fail(ErrorCode::Parse, "rational must be a string 'a/b'");
  const auto s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    std::size_t pos = 0;
    const auto num = std::stoll(s.substr(0, slash), &pos);
    if (pos != (slash == std::string::npos ? s.size() : slash)) throw std::invalid_argument(s);
    if (slash == std::string::npos) return Rational(num);
    const auto den = std::stoll(s.substr(slash + 1), &pos);
    if (pos != s.size() - slash - 1 || den == 0) throw std::invalid_argument(s);
    return Rational(num, den);
  } catch (const std::logic_error&) {
    fail(ErrorCode::Parse, "bad rational '" + s + "'");
  }
}

json census_to_json(const SwitcherCensus& c) {
  json j;
  j["mode"] = c.mode == CensusMode::Exact ? "exact" : "sampled";
  j["total_c4"] = c.total_c4;
  json by_type;
  for (int t = 1; t <= 6; ++t) {
    if (c.mode == CensusMode::Exact) {
      by_type[std::to_string(t)] = static_cast<std::uint64_t>(c.counts_by_type[t]);
    } else {
      by_type[std::to_string(t)] = c.counts_by_type[t];
    }
  }
  j["by_type"] = by_type;
  if (c.mode == CensusMode::Exact) {
    j["switchers"] = static_cast<std::uint64_t>(c.switcher_count);
  } else {
    j["switchers"] = c.switcher_count;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
  }
  j["ci"] = c.ci_halfwidth;
  j["density"] = c.total_c4 ? c.switcher_count / static_cast<double>(c.total_c4) : 0.0;
  return j;
}

json drc_to_json(const DrcWitness& w) {
  return {{"center", w.center},
          {"good_pairs", w.good_pairs},
          {"x", w.x},
          {"y", w.y},
          {"min_degree", w.min_degree},
          {"n1", w.n1},
          {"n2", w.n2},
          {"thresholds",
           {{"degree", w.thresholds.degree_threshold},
            {"good_pair", w.thresholds.good_pair_threshold},
            {"min_degree", w.thresholds.min_degree_target}}}};
}

json verification_to_json(const VerificationReport& r) {
  return {{"passes", r.passes},
          {"missing", edges_to_json(r.missing)},
          {"duplicated", edges_to_json(r.duplicated)},
          {"violations", r.violations}};
}

json concentration_to_json(const ConcentrationReport& r) {
  json tail = json::array();
  for (const auto& row : r.tail) {
    json t{{"t", row.t}, {"empirical", row.empirical}, {"chebyshev", row.chebyshev}};
    t["talagrand"] = row.talagrand ? json(*row.talagrand) : json(nullptr);
    tail.push_back(std::move(t));
  }
  json j{{"trials", r.trials},
         {"seed", r.seed},
         {"family_size", r.family_size},
         {"arity", r.arity},
         {"delta", r.delta},
         {"p", r.p},
         {"target", r.target},
         {"mean", r.mean},
         {"variance", r.variance},
         {"median", r.median},
         {"mean_tolerance", r.mean_tolerance},
         {"mean_pass", r.mean_pass},
         {"median_window", r.median_window},
         {"fraction_within_window", r.fraction_within_window},
         {"window_pass", r.window_pass},
         {"variance_bound", r.variance_bound},
         {"variance_pass", r.variance <= r.variance_bound},
         {"lipschitz_c", r.lipschitz_c},
         {"certificate_r", r.certificate_r},
         {"tail", tail}};
  if (!r.samples.empty()) j["samples"] = r.samples;
  return j;
}

std::string tail_csv(const ConcentrationReport& r) {
  std::string out = "t,empirical,chebyshev,talagrand\n";
  for (const auto& row : r.tail) {
    out += fmt_double(row.t) + "," + fmt_double(row.empirical) + "," + fmt_double(row.chebyshev) +
           "," + (row.talagrand ? fmt_double(*row.talagrand) : std::string()) + "\n";
  }
  return out;
}

json balance_to_json(const BalanceOutcome& b) {
  json disc = json::array();
  for (const auto& r : b.per_factor_disc) disc.push_back(rational_to_json(r));
  return {{"found", b.found},
          {"trials_used", b.trials_used},
          {"permutation", b.permutation},
          {"per_factor_disc", disc},
          {"worst_deviation", rational_to_json(b.worst_deviation)}};
}

}  // namespace hidisc
