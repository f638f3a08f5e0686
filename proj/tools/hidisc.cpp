// hidisc: signed complete graphs, switcher census, permutation experiments and
// high-discrepancy 1-factorizations from the command line.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hidisc/balancer.hpp"
#include "hidisc/oracle.hpp"
#include "hidisc/pipeline.hpp"
#include "hidisc/serialize.hpp"
#include "hidisc/switchers.hpp"

using namespace hidisc;
using nlohmann::json;

namespace {

constexpr int kExitMet = 0;
constexpr int kExitError = 1;
constexpr int kExitBestEffort = 2;

json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Parse, "cannot open '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, path + ": " + e.what());
  }
}

struct Output {
  std::string path = "-";
  std::string format = "json";
  bool pretty = false;

  void add(CLI::App* app, bool csv) {
    app->add_option("-o,--output", path, "Output file ('-' for stdout)");
    if (csv) {
      app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    }
    app->add_flag("--pretty", pretty, "Indent JSON output");
  }

  void write(const std::string& text) const {
    if (path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << text;
  }
  void write(const json& j) const { write(j.dump(pretty ? 2 : -1) + "\n"); }
  bool csv() const { return format == "csv"; }
};

struct PipelineFlags {
  std::string mode = "desk";
  std::optional<double> gamma, epsilon, p0;
  std::vector<double> targets;
  std::string strategy = "auto";
  Seed seed = 0;
  std::optional<std::uint64_t> max_trials;
  std::optional<std::uint32_t> attempts;
  std::optional<std::uint64_t> search_budget;
  bool explain = false;
  bool no_polish = false;

  void add(CLI::App* app) {
    app->add_option("--mode", mode, "Preset: desk or paper")->check(CLI::IsMember({"desk", "paper"}));
    app->add_option("--gamma", gamma, "Dichotomy threshold");
    app->add_option("--epsilon", epsilon, "Balancing slack");
    app->add_option("--targets", targets, "primary,final boost targets")->delimiter(',')->expected(2);
    app->add_option("--strategy", strategy, "c4k4, matching_pairs or auto")
        ->check(CLI::IsMember({"c4k4", "matching_pairs", "auto"}));
    app->add_option("--seed", seed, "RNG seed");
    app->add_option("--max-trials", max_trials, "Balancer draws per attempt");
    app->add_option("--attempts", attempts, "Boosted-branch restarts");
    app->add_option("--search-budget", search_budget, "Odd-n search node budget");
    app->add_flag("--no-polish", no_polish, "Skip the cross-matching swap pass");
    app->add_flag("--explain", explain, "Include swap logs and the permutation");
  }

  PipelineConfig config() const {
    PipelineConfig c = mode == "paper" ? PipelineConfig::paper() : PipelineConfig::desk();
    if (gamma) c.gamma = *gamma;
    if (epsilon) c.epsilon = *epsilon;
    if (targets.size() == 2) {
      c.primary_target = targets[0];
      c.final_target = targets[1];
    }
    c.strategy = parse_strategy(strategy);
    c.seed = seed;
    if (max_trials) c.max_trials = *max_trials;
    if (attempts) c.attempts = *attempts;
    if (search_budget) c.decomposition.search_node_budget = *search_budget;
    c.polish = !no_polish;
    c.validate();
    return c;
  }
};

int status_exit(BoostStatus s) { return s == BoostStatus::Met ? kExitMet : kExitBestEffort; }

std::string csv_matchings(const PipelineResult& r) {
  std::string out = "index,sum,disc,abs_disc,deviation\n";
  for (std::size_t i = 0; i < r.per_matching.size(); ++i) {
    const auto& p = r.per_matching[i];
    out += std::to_string(i) + "," + std::to_string(p.sum) + "," + p.signed_disc.str() + "," +
           p.abs_disc.str() + "," + p.deviation.str() + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-discrepancy 1-factorizations of signed complete graphs"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a signing (or an edge colouring)");
  Vertex gen_n = 8;
  std::string gen_kind = "biased";
  double gen_p = 0.5;
  std::optional<std::uint64_t> gen_positive;
  Seed gen_seed = 0;
  std::string gen_form = "negative_edges";
  std::uint32_t gen_colors = 0;
  Output gen_out;
  gen->add_option("-n,--num-vertices", gen_n, "Vertex count")->required();
  gen->add_option("--kind", gen_kind, "all-plus, biased, exact or monochrome (colourings)")
      ->check(CLI::IsMember({"all-plus", "biased", "exact", "monochrome"}));
  gen->add_option("-p", gen_p, "Positive probability / fraction");
  gen->add_option("--positive", gen_positive, "Exact number of positive edges");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--form", gen_form, "negative_edges or signs")
      ->check(CLI::IsMember({"negative_edges", "signs"}));
  gen->add_option("--colors", gen_colors, "Emit a uniform random k-colouring instead");
  gen_out.add(gen, false);

  // disc
  auto* disc = app.add_subcommand("disc", "Discrepancy and degree statistics");
  std::string disc_in;
  Output disc_out;
  disc->add_option("input", disc_in, "Signing JSON ('-' for stdin)")->required();
  disc_out.add(disc, true);

  // switchers
  auto* sw = app.add_subcommand("switchers", "Switcher census");
  std::string sw_in;
  std::string sw_mode = "exact";
  std::string sw_method = "codegree";
  std::uint64_t sw_samples = 10'000;
  Seed sw_seed = 0;
  bool sw_drc = false;
  std::string sw_thresholds = "desk";
  Output sw_out;
  sw->add_option("input", sw_in, "Signing JSON")->required();
  sw->add_option("--census", sw_mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  sw->add_option("--method", sw_method, "codegree or enumerate")
      ->check(CLI::IsMember({"codegree", "enumerate"}));
  sw->add_option("--samples", sw_samples, "Sample count");
  sw->add_option("--seed", sw_seed, "RNG seed");
  sw->add_flag("--drc", sw_drc, "Also report the good-pair witness");
  sw->add_option("--thresholds", sw_thresholds, "desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  sw_out.add(sw, true);

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "Hit-count concentration experiment");
  std::string mc_spec;
  std::uint32_t mc_n = 1000;
  std::string mc_family = "matching";
  std::string mc_signing = "edge";
  double mc_p = 0.5;
  std::uint64_t mc_trials = 2000;
  Seed mc_seed = 0;
  bool mc_samples = false;
  Output mc_out;
  mc->add_option("--spec", mc_spec, "Experiment spec JSON (overrides the flags)");
  mc->add_option("-n,--ground-size", mc_n, "Ground set size");
  mc->add_option("--family", mc_family, "matching (k=2) or cycles (k=4)")
      ->check(CLI::IsMember({"matching", "cycles"}));
  mc->add_option("--signing", mc_signing, "edge, switcher or plus")
      ->check(CLI::IsMember({"edge", "switcher", "plus"}));
  mc->add_option("-p", mc_p, "Exact positive fraction of the edge signing");
  mc->add_option("--trials", mc_trials, "Trials");
  mc->add_option("--seed", mc_seed, "RNG seed");
  mc->add_flag("--samples", mc_samples, "Keep raw hit counts");
  mc_out.add(mc, true);

  // decompose / unbalanced / multicolor
  auto* dec = app.add_subcommand("decompose", "High-discrepancy 1-factorization");
  std::string dec_in;
  PipelineFlags dec_flags;
  Output dec_out;
  dec->add_option("input", dec_in, "Signing JSON")->required();
  dec_flags.add(dec);
  dec_out.add(dec, true);

  auto* unb = app.add_subcommand("unbalanced", "1-factorization pushed away from disc(K)");
  std::string unb_in;
  double unb_p0 = 1.0;
  PipelineFlags unb_flags;
  Output unb_out;
  unb->add_option("input", unb_in, "Signing JSON")->required();
  unb->add_option("--p0", unb_p0, "Bound on |disc(K)|, in (0, 1]");
  unb_flags.add(unb);
  unb_out.add(unb, true);

  auto* mcol = app.add_subcommand("multicolor", "Dominant colour per matching");
  std::string mcol_in;
  PipelineFlags mcol_flags;
  Output mcol_out;
  mcol->add_option("input", mcol_in, "Colouring JSON")->required();
  mcol_flags.add(mcol);
  mcol_out.add(mcol, true);

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exhaustive optimum on at most 8 vertices");
  std::string orc_in;
  Output orc_out;
  orc->add_option("input", orc_in, "Signing JSON")->required();
  orc_out.add(orc, false);

  // verify
  auto* ver = app.add_subcommand("verify", "Recheck a decomposition result");
  std::string ver_graph, ver_result;
  std::optional<std::string> ver_claimed;
  Output ver_out;
  ver->add_option("graph", ver_graph, "Signing JSON")->required();
  ver->add_option("result", ver_result, "Result JSON from decompose")->required();
  ver->add_option("--claimed-min", ver_claimed, "Minimum to check, as a/b (default: the result's)");
  ver_out.add(ver, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*gen) {
      if (gen_colors > 0) {
        if (gen_colors < 2) fail(ErrorCode::InvalidArgument, "--colors needs k >= 2");
        std::vector<std::uint32_t> colors(choose2(gen_n), 1);
        if (gen_kind != "monochrome") {
          Rng rng(gen_seed);
          for (auto& c : colors) c = static_cast<std::uint32_t>(rng.below(gen_colors)) + 1;
        }
        gen_out.write(json{{"num_vertices", gen_n}, {"num_colors", gen_colors}, {"colors", colors}});
        return kExitMet;
      }
      SigningSpec spec = signing::AllPlus{};
      if (gen_kind == "biased") spec = signing::Biased{gen_p};
      if (gen_kind == "exact") {
        spec = signing::ExactCount{
            gen_positive ? *gen_positive
                         : static_cast<std::uint64_t>(std::llround(gen_p * choose2(gen_n)))};
      }
      const auto g = generate_signing(gen_n, spec, gen_seed);
      gen_out.write(signing_to_json(g, gen_form == "signs" ? SigningForm::Signs
                                                           : SigningForm::NegativeEdges));
      return kExitMet;
    }

    if (*disc) {
      const auto g = signing_from_json(read_json(disc_in));
      const Rational d = graph_discrepancy(g);
      if (disc_out.csv()) {
        std::string out = "vertex,d_plus,d_minus\n";
        for (Vertex v = 0; v < g.num_vertices(); ++v) {
          const auto s = degree_stats(g, v);
          out += std::to_string(v) + "," + std::to_string(s.d_plus) + "," +
                 std::to_string(s.d_minus) + "\n";
        }
        disc_out.write(out);
        return kExitMet;
      }
      json degrees = json::array();
      for (Vertex v = 0; v < g.num_vertices(); ++v) {
        const auto s = degree_stats(g, v);
        degrees.push_back({{"vertex", v}, {"d_plus", s.d_plus}, {"d_minus", s.d_minus}});
      }
      disc_out.write(json{{"num_vertices", g.num_vertices()},
                          {"num_edges", g.num_edges()},
                          {"positive", g.positive_count()},
                          {"negative", g.num_edges() - g.positive_count()},
                          {"signed_sum", g.total_sum()},
                          {"disc", rational_to_json(d)},
                          {"abs_disc", rational_to_json(d.abs())},
                          {"disc_value", d.to_double()},
                          {"degrees", degrees}});
      return kExitMet;
    }

    if (*sw) {
      const auto g = signing_from_json(read_json(sw_in));
      CensusOptions o;
      o.mode = sw_mode == "exact" ? CensusMode::Exact : CensusMode::Sampled;
      o.method = sw_method == "codegree" ? ExactMethod::Codegree : ExactMethod::Enumerate;
      o.samples = sw_samples;
      o.seed = sw_seed;
      const auto c = count_switchers(g, o);
      if (sw_out.csv()) {
        std::string out = "type,count,switcher\n";
        for (int t = 1; t <= 6; ++t) {
          std::ostringstream os;
          os.precision(17);
          os << c.counts_by_type[t];
          out += std::to_string(t) + "," + os.str() + "," + (t >= 4 ? "1" : "0") + "\n";
        }
        sw_out.write(out);
        return kExitMet;
      }
      json j = census_to_json(c);
      if (sw_drc) {
        const auto th = sw_thresholds == "paper" ? DrcThresholds::paper() : DrcThresholds::desk();
        const auto w = drc_witness(g, th);
        j["drc"] = w ? drc_to_json(*w) : json(nullptr);
      }
      sw_out.write(j);
      return kExitMet;
    }

    if (*mc) {
      if (!mc_spec.empty()) {
        const json s = read_json(mc_spec);
        mc_n = s.value("ground_size", mc_n);
        mc_family = s.value("family", mc_family);
        mc_signing = s.value("signing", mc_signing);
        mc_p = s.value("p", mc_p);
        mc_trials = s.value("trials", mc_trials);
        mc_seed = s.value("seed", mc_seed);
      }
      const auto positive = static_cast<std::uint64_t>(std::llround(mc_p * choose2(mc_n)));
      const auto g = generate_signing(mc_n, signing::ExactCount{positive}, mc_seed);
      std::optional<TupleFamily> family;
      if (mc_family == "matching") {
        if (mc_n % 2) fail(ErrorCode::InvalidArgument, "matching family needs even n");
        std::vector<Edge> m;
        for (Vertex v = 0; v + 1 < mc_n; v += 2) m.push_back(Edge{v, v + 1});
        family = TupleFamily::orientation_lift(mc_n, m);
      } else {
        if (mc_n % 4) fail(ErrorCode::InvalidArgument, "cycle family needs n divisible by 4");
        std::vector<FourCycle> cs;
        for (Vertex v = 0; v < mc_n; v += 4) cs.push_back(FourCycle::canonical(v, v + 1, v + 2, v + 3));
        family = TupleFamily::cycle_orientations(mc_n, cs);
      }
      std::optional<TupleSigning> sigma;
      if (mc_signing == "edge") sigma = TupleSigning::edge_lift(g);
      else if (mc_signing == "plus") sigma = TupleSigning::constant(family->arity(), 1, mc_n);
      else sigma = TupleSigning::switcher_lift(g, count_switchers(g));
      ConcentrationOptions o;
      o.trials = mc_trials;
      o.seed = derive_seed(mc_seed, 1);
      o.keep_samples = mc_samples;
      const auto r = concentration_experiment(*family, *sigma, o);
      if (mc_out.csv()) {
        mc_out.write(tail_csv(r));
      } else {
        json j = concentration_to_json(r);
        j["spec"] = {{"ground_size", mc_n}, {"family", mc_family}, {"signing", mc_signing},
                     {"p", mc_p}, {"trials", mc_trials}, {"seed", mc_seed}};
        mc_out.write(j);
      }
      return kExitMet;
    }

    if (*dec || *unb) {
      const bool unbalanced = unb->parsed();
      const auto& flags = unbalanced ? unb_flags : dec_flags;
      const auto& out = unbalanced ? unb_out : dec_out;
      const auto g = signing_from_json(read_json(unbalanced ? unb_in : dec_in));
      const auto config = flags.config();
      const PipelineResult r = unbalanced ? decompose_unbalanced(g, config, unb_p0)
                                          : decompose_high_discrepancy(g, config);
      if (out.csv()) out.write(csv_matchings(r));
      else out.write(pipeline_result_to_json(r, flags.explain));
      return status_exit(r.status);
    }

    if (*mcol) {
      const json j = read_json(mcol_in);
      Vertex nv = 0;
      std::uint32_t k = 0;
      std::vector<std::uint32_t> colors;
      try {
        nv = j.at("num_vertices").get<Vertex>();
        k = j.at("num_colors").get<std::uint32_t>();
        colors = j.at("colors").get<std::vector<std::uint32_t>>();
      } catch (const json::exception& e) {
        fail(ErrorCode::Parse, std::string("colouring: ") + e.what());
      }
      const auto r = multicolor_decompose(nv, colors, k, mcol_flags.config());
      if (mcol_out.csv()) {
        std::string out = "index,dominant,count,excess\n";
        for (std::size_t i = 0; i < r.per_matching.size(); ++i) {
          const auto& c = r.per_matching[i];
          out += std::to_string(i) + "," + std::to_string(c.dominant) + "," +
                 std::to_string(c.count) + "," + c.excess.str() + "\n";
        }
        mcol_out.write(out);
      } else {
        mcol_out.write(multicolor_to_json(r, mcol_flags.explain));
      }
      return status_exit(r.pipeline.status);
    }

    if (*orc) {
      orc_out.write(oracle_to_json(brute_force_oracle(signing_from_json(read_json(orc_in)))));
      return kExitMet;
    }

    if (*ver) {
      const auto g = signing_from_json(read_json(ver_graph));
      const auto claims = claims_from_json(read_json(ver_result));
      const Rational claimed = ver_claimed ? rational_from_json(*ver_claimed) : claims.min_abs_disc;
      const auto rep = verify_claims(g, claims, claimed);
      json j = verification_to_json(rep);
      j["claimed_min"] = rational_to_json(claimed);
      ver_out.write(j);
      return rep.passes ? kExitMet : kExitError;
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", error_code_name(e.code())}, {"message", e.what()}}.dump() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return kExitError;
  }
  return kExitError;
}
