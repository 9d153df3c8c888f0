#pragma once

// Ground-state lower bounds for the characteristic breather and the analytic
// upper bound on N(E) they imply.
//
// Setting: H₀ = -Δ^L - a on Λ_L with a = α/4L², trial state ψ = L^{-1/2}χ_{Λ_L},
// V = a + W. Cutting the couplings at 1/2 gives Ṽ ≤ V and the Thirring chain
//
//   E₁(H) ≥ E₁(H̃) ≥ -a + ⟨ψ, Ṽ⁻¹ψ⟩⁻¹ = a·S̃/(a + 1 - S̃) ≥ α S̃ / (5 L²),
//
// where the last step needs a ≤ 1/4, i.e. L² ≥ α.

#include <optional>
#include <string>
#include <vector>

#include "lifshitz/randomness.hpp"

namespace lifshitz {

// ⟨ψ, V⁻¹ψ⟩⁻¹ = L (∫_{Λ_L} V⁻¹)⁻¹ = a(a+1)/(a+1-s) for V = a + W, W ∈ {0, 1} with box average s.
double harmonic_mean_term(double alpha, int L, double s);

struct NumericE1Options {
  int m = 64;
  double tol = 0.0;  // <= 0: eigensolver default
};

struct ThirringReport {
  double alpha = 0.0;
  int L = 0;
  double a = 0.0;
  double s_l = 0.0;
  double s_l_tilde = 0.0;
  double harmonic_term = 0.0;
  double e1_free = 0.0;          // E₁(H₀^L) = -a
  double e2_free_lower = 0.0;    // E₂(H₀^L) ≥ 3α/4L²
  double lower = 0.0;            // -a + harmonic_term
  double simplified = 0.0;       // α S̃ / (5 L²)
  bool thirring_condition = false;  // lower ≤ a < e2_free_lower
  bool simplification_valid = false;  // L² ≥ α
  bool alpha_guard = false;           // α ≤ π², keeps E₂(-Δ^L) ≥ α/L²
  bool applicable = false;
  std::optional<double> numeric_e1;
  std::optional<int> mesh_points;
};

ThirringReport thirring_lower_bound(double alpha, const Realization& r);
// Same, with E₁ of the discretized characteristic-breather operator attached.
ThirringReport thirring_lower_bound(double alpha, const Realization& r, const NumericE1Options& numeric);

// Temple: E₁ ≥ m1 - (m2 - m1²)/(e2_lower - m1), valid when m1 < e2_lower.
// Returns nullopt when inapplicable. Throws when m2 < m1² beyond rounding.
std::optional<double> temple_lower_bound(double m1, double m2, double e2_lower);

// Gap input for Temple in the constant state: E₂(-Δ^L) ≥ α/L², the estimate behind E₂(H₀^L) ≥ 3α/4L².
inline double temple_gap_estimate(double alpha, int L) { return alpha / (static_cast<double>(L) * L); }
// Sharper alternative: the exact free Neumann gap (π/L)².
double free_neumann_gap(int L);

struct TempleThirringComparison {
  double m1 = 0.0;
  double m2 = 0.0;
  double e2_lower = 0.0;
  std::optional<double> temple;
  std::optional<double> temple_free_gap;
  double thirring_simplified = 0.0;
  bool temple_useless() const { return !temple || *temple <= 0.0; }
};

TempleThirringComparison compare_temple_thirring(double alpha, const Realization& r);

// ⌊β E^{-1/2}⌋; zero means E is out of regime.
long choose_L(double E, double beta);

// √(α E{min(λ, 1/2)} / 10). Throws when the cut-off mean vanishes.
double beta_max(double alpha, const CouplingDistribution& dist);

struct CertifyOptions {
  // Hoeffding at 5L²E/α instead of μ̃/2.
  bool sharp_threshold = false;
};

struct CertifiedBound {
  double E = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double beta_max = 0.0;
  double mu_tilde = 0.0;
  long L_chosen = 0;
  long free_count = 0;
  std::optional<double> ld_threshold;
  std::optional<double> ld_factor;
  std::optional<double> bound;
  bool valid = false;
  std::vector<std::string> invalid_reasons;
};

CertifiedBound certified_ids_bound(double E, double alpha, double beta, const CouplingDistribution& dist,
                                   CertifyOptions options = {});

// Mesh slack c·h for comparing a discretized E₁ against continuum bounds.
// c is calibrated once from the constant potential W ≡ 1: twice the largest
// |E₂(discrete) - ((π/L)² + 1)| / h over L = 2 … 20 at m = 8.
double mesh_slack_constant();
inline double mesh_slack(int m) { return mesh_slack_constant() / m; }

}  // namespace lifshitz
