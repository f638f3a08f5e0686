#pragma once

#include <string>

#include <json.hpp>

#include "hidisc/balancer.hpp"
#include "hidisc/factorizations.hpp"
#include "hidisc/signed_graph.hpp"
#include "hidisc/switchers.hpp"

namespace hidisc {

enum class SigningForm { NegativeEdges, Signs };

nlohmann::json signing_to_json(const SignedCompleteGraph& g,
                               SigningForm form = SigningForm::NegativeEdges);
/// Accepts either form. Throws Parse on malformed input.
SignedCompleteGraph signing_from_json(const nlohmann::json& j);

nlohmann::json edges_to_json(std::span<const Edge> edges);
std::vector<Edge> edges_from_json(const nlohmann::json& j);

nlohmann::json decomposition_to_json(const FactorDecomposition& d);
FactorDecomposition decomposition_from_json(const nlohmann::json& j);

nlohmann::json factorization_to_json(const OneFactorization& f);
OneFactorization factorization_from_json(const nlohmann::json& j);

nlohmann::json rational_to_json(const Rational& r);
Rational rational_from_json(const nlohmann::json& j);

nlohmann::json census_to_json(const SwitcherCensus& c);
nlohmann::json drc_to_json(const DrcWitness& w);
nlohmann::json verification_to_json(const VerificationReport& r);

nlohmann::json concentration_to_json(const ConcentrationReport& r);
/// Columns t, empirical, chebyshev, talagrand.
std::string tail_csv(const ConcentrationReport& r);

nlohmann::json balance_to_json(const BalanceOutcome& b);

}  // namespace hidisc
