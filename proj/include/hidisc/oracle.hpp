#pragma once

#include <cstdint>

#include <json.hpp>

#include "hidisc/factorizations.hpp"
#include "hidisc/signed_graph.hpp"

namespace hidisc {

struct OracleResult {
  Rational optimum;  // max over 1-factorizations of the min matching |disc|
  OneFactorization witness;
  std::uint64_t factorizations_enumerated = 0;
};

/// Full enumeration on 4, 6 or 8 vertices; matching j is the one holding {0, j}.
/// Throws SizeLimit above 8 vertices.
OracleResult brute_force_oracle(const SignedCompleteGraph& g);

nlohmann::json oracle_to_json(const OracleResult& r);

}  // namespace hidisc
