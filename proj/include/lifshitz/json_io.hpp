#pragma once

// JSON views of the report types; every intermediate of a bound is emitted so
// a failing check can be audited field by field.

#include <json.hpp>

#include "lifshitz/bounds.hpp"
#include "lifshitz/ids.hpp"
#include "lifshitz/potentials.hpp"
#include "lifshitz/randomness.hpp"

namespace lifshitz {

void to_json(nlohmann::json& j, const ProbabilityEstimate& p);
void to_json(nlohmann::json& j, const ThirringReport& r);
void to_json(nlohmann::json& j, const TempleThirringComparison& c);
void to_json(nlohmann::json& j, const CertifiedBound& b);
void to_json(nlohmann::json& j, const HypothesisAReport& r);
void to_json(nlohmann::json& j, const LifshitzFit& f);
void to_json(nlohmann::json& j, const FiniteVolumeBoundReport& r);

}  // namespace lifshitz
