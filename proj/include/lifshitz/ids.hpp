#pragma once

// Monte Carlo estimation of the integrated density of states from Neumann
// eigenvalue counts, and the log|log N| vs log(E - E₀) regression.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lifshitz/discretize.hpp"
#include "lifshitz/potentials.hpp"
#include "lifshitz/randomness.hpp"

namespace lifshitz {

struct IdsEstimate {
  int L = 0;
  int m = 0;
  std::uint64_t R = 0;
  std::uint64_t seed = 0;
  std::vector<double> grid;     // ascending energies
  std::vector<double> n_hat;    // mean of count_leq / L
  std::vector<double> ci_half;  // 95% normal-approximation half-width
  double runtime_seconds = 0.0;
};

struct IdsOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  double shift = 0.0;
};

IdsEstimate estimate_ids(const SingleSiteModel& model, const CouplingDistribution& dist, int L, int m,
                         std::vector<double> grid, std::uint64_t R, std::uint64_t seed, IdsOptions options = {});

// Normalized eigenvalue counts count_leq(E)/L of one realization (the sample path of N_ω).
std::vector<double> realization_counts(const SingleSiteModel& model, const Realization& r, int m,
                                       const std::vector<double>& grid, double shift = 0.0);

// E_j = e_max · ratio^j, j = 0 … points-1, returned ascending.
std::vector<double> geometric_grid(double e_max, double ratio, int points);

struct LifshitzFit {
  double e_lo = 0.0;
  double e_hi = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_ci = 0.0;  // 95% half-width (Student t)
  std::size_t points_used = 0;
  double E0 = 0.0;
  double admissibility_factor = 3.0;  // n_hat > factor · ci_half
};

// Least squares of log|log n_hat| against log(E - E₀) over admissible points:
// 0 < n_hat < 1 and n_hat > 3 · ci_half.
LifshitzFit fit_lifshitz_exponent(const IdsEstimate& est, double E0 = 0.0);

struct FiniteVolumeBoundReport {
  double E = 0.0;
  int L = 0;
  int m = 0;
  std::uint64_t R = 0;
  double left = 0.0;  // N̂(E)
  double left_ci = 0.0;
  ProbabilityEstimate ground_state_below;  // P̂{E₁ ≤ E}
  long free_count = 0;
  double right = 0.0;  // L⁻¹ · free_count · P̂
  double right_ci = 0.0;
  bool holds = false;  // left ≤ right within the combined half-widths
};

FiniteVolumeBoundReport finite_volume_bound_check(const SingleSiteModel& model, const CouplingDistribution& dist,
                                                  int L, int m, double E, std::uint64_t R, std::uint64_t seed,
                                                  IdsOptions options = {});

// Columns E, n_hat, ci_half, R, L, m, seed.
void write_csv(const IdsEstimate& est, std::ostream& out);
IdsEstimate read_ids_csv(std::istream& in);

}  // namespace lifshitz
