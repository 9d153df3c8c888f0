#include "lifshitz/json_io.hpp"

namespace lifshitz {

namespace {

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void to_json(nlohmann::json& j, const ProbabilityEstimate& p) {
  j = {{"hits", p.hits},   {"samples", p.samples}, {"estimate", p.estimate},
       {"lower", p.lower}, {"upper", p.upper},     {"ci_half", p.ci_half}};
}

void to_json(nlohmann::json& j, const ThirringReport& r) {
  j = {{"alpha", r.alpha},
       {"L", r.L},
       {"a", r.a},
       {"s_l", r.s_l},
       {"s_l_tilde", r.s_l_tilde},
       {"harmonic_term", r.harmonic_term},
       {"e1_free", r.e1_free},
       {"e2_free_lower", r.e2_free_lower},
       {"lower", r.lower},
       {"simplified", r.simplified},
       {"thirring_condition", r.thirring_condition},
       {"simplification_valid", r.simplification_valid},
       {"alpha_guard", r.alpha_guard},
       {"applicable", r.applicable},
       {"numeric_e1", optional_json(r.numeric_e1)},
       {"mesh_points", optional_json(r.mesh_points)}};
}

void to_json(nlohmann::json& j, const TempleThirringComparison& c) {
  j = {{"m1", c.m1},
       {"m2", c.m2},
       {"e2_lower", c.e2_lower},
       {"temple", optional_json(c.temple)},
       {"temple_free_gap", optional_json(c.temple_free_gap)},
       {"thirring_simplified", c.thirring_simplified},
       {"temple_useless", c.temple_useless()}};
}

void to_json(nlohmann::json& j, const CertifiedBound& b) {
  j = {{"E", b.E},
       {"alpha", b.alpha},
       {"beta", b.beta},
       {"beta_max", b.beta_max},
       {"mu_tilde", b.mu_tilde},
       {"L_chosen", b.L_chosen},
       {"free_count", b.free_count},
       {"ld_threshold", optional_json(b.ld_threshold)},
       {"ld_factor", optional_json(b.ld_factor)},
       {"bound", optional_json(b.bound)},
       {"valid", b.valid},
       {"invalid_reasons", b.invalid_reasons}};
}

void to_json(nlohmann::json& j, const HypothesisAReport& r) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"clause", v.clause}, {"lambda", v.lambda}, {"x", v.x}, {"detail", v.detail}});
  }
  j = {{"passes", r.passes},
       {"epsilon1", optional_json(r.epsilon1)},
       {"epsilon2", optional_json(r.epsilon2)},
       {"kappa", optional_json(r.kappa)},
       {"violations", violations},
       {"lambda_grid", r.lambda_grid},
       {"x_grid", r.x_grid}};
}

void to_json(nlohmann::json& j, const LifshitzFit& f) {
  j = {{"e_lo", f.e_lo},
       {"e_hi", f.e_hi},
       {"slope", f.slope},
       {"intercept", f.intercept},
       {"slope_ci", f.slope_ci},
       {"points_used", f.points_used},
       {"E0", f.E0},
       {"admissibility_factor", f.admissibility_factor}};
}

void to_json(nlohmann::json& j, const FiniteVolumeBoundReport& r) {
  j = {{"E", r.E},
       {"L", r.L},
       {"m", r.m},
       {"R", r.R},
       {"left", r.left},
       {"left_ci", r.left_ci},
       {"ground_state_below", r.ground_state_below},
       {"free_count", r.free_count},
       {"right", r.right},
       {"right_ci", r.right_ci},
       {"holds", r.holds}};
}

}  // namespace lifshitz
