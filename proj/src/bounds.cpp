#include "lifshitz/bounds.hpp"

#include <cmath>
#include <numbers>

#include "lifshitz/discretize.hpp"
#include "lifshitz/eigensolve.hpp"
#include "lifshitz/errors.hpp"
#include "lifshitz/potentials.hpp"

namespace lifshitz {

double harmonic_mean_term(double alpha, int L, double s) {
  require(alpha > 0.0, "harmonic_mean_term: alpha must be positive");
  require(L >= 1, "harmonic_mean_term: L must be >= 1");
  require(s >= 0.0 && s <= 1.0, "harmonic_mean_term: s must lie in [0, 1]");
  const double a = alpha / (4.0 * L * L);
  return a * (a + 1.0) / (a + 1.0 - s);
}

ThirringReport thirring_lower_bound(double alpha, const Realization& r) {
  require(alpha > 0.0, "thirring_lower_bound: alpha must be positive");
  require(r.L >= 1 && r.lambdas.size() == static_cast<std::size_t>(r.L), "thirring_lower_bound: malformed realization");
  ThirringReport rep;
  rep.alpha = alpha;
  rep.L = r.L;
  const double L2 = static_cast<double>(r.L) * r.L;
  rep.a = alpha / (4.0 * L2);
  const auto stats = averages(r);
  rep.s_l = stats.s_l;
  rep.s_l_tilde = stats.s_l_tilde;
  rep.harmonic_term = harmonic_mean_term(alpha, r.L, stats.s_l_tilde);
  rep.e1_free = -rep.a;
  rep.e2_free_lower = 3.0 * alpha / (4.0 * L2);
  rep.lower = rep.e1_free + rep.harmonic_term;
  rep.simplified = alpha * stats.s_l_tilde / (5.0 * L2);
  rep.thirring_condition = rep.lower <= rep.a && rep.a < rep.e2_free_lower;
  rep.simplification_valid = L2 >= alpha;
  rep.alpha_guard = alpha <= std::numbers::pi * std::numbers::pi;
  rep.applicable = rep.thirring_condition && rep.simplification_valid && rep.alpha_guard;
  return rep;
}

ThirringReport thirring_lower_bound(double alpha, const Realization& r, const NumericE1Options& numeric) {
  ThirringReport rep = thirring_lower_bound(alpha, r);
  const RandomPotential W{SingleSiteModel::characteristic_breather(), r};
  const auto T = assemble(W, numeric.m);
  rep.numeric_e1 = ground_state_energy(T, {.tol = numeric.tol});
  rep.mesh_points = numeric.m;
  return rep;
}

std::optional<double> temple_lower_bound(double m1, double m2, double e2_lower) {
  require(m2 >= m1 * m1 - 1e-12 * std::max(1.0, m1 * m1), "temple_lower_bound: requires m2 >= m1^2");
  if (!(m1 < e2_lower)) return std::nullopt;
  return m1 - (m2 - m1 * m1) / (e2_lower - m1);
}

double free_neumann_gap(int L) {
  const double k = std::numbers::pi / L;
  return k * k;
}

TempleThirringComparison compare_temple_thirring(double alpha, const Realization& r) {
  const RandomPotential W{SingleSiteModel::characteristic_breather(), r};
  const auto mo = moments(W);
  TempleThirringComparison c;
  c.m1 = mo.m1;
  c.m2 = mo.m2;
  c.e2_lower = temple_gap_estimate(alpha, r.L);
  c.temple = temple_lower_bound(mo.m1, mo.m2, c.e2_lower);
  c.temple_free_gap = temple_lower_bound(mo.m1, mo.m2, free_neumann_gap(r.L));
  c.thirring_simplified = thirring_lower_bound(alpha, r).simplified;
  return c;
}

long choose_L(double E, double beta) {
  require(E > 0.0, "choose_L: E must be positive");
  require(beta > 0.0, "choose_L: beta must be positive");
  return static_cast<long>(std::floor(beta / std::sqrt(E)));
}

double beta_max(double alpha, const CouplingDistribution& dist) {
  require(alpha > 0.0, "beta_max: alpha must be positive");
  const double mu = dist.mean_cutoff();
  require(mu > 0.0, "beta_max: E{min(lambda, 1/2)} = 0, the coupling distribution is degenerate at 0");
  return std::sqrt(alpha * mu / 10.0);
}

CertifiedBound certified_ids_bound(double E, double alpha, double beta, const CouplingDistribution& dist,
                                   CertifyOptions options) {
  require(E > 0.0, "certified_ids_bound: E must be positive");
  require(alpha > 0.0, "certified_ids_bound: alpha must be positive");
  require(beta > 0.0, "certified_ids_bound: beta must be positive");
  CertifiedBound cb;
  cb.E = E;
  cb.alpha = alpha;
  cb.beta = beta;
  cb.mu_tilde = dist.mean_cutoff();
  auto& why = cb.invalid_reasons;

  if (dist.lower() < 0.0 || dist.upper() > 1.0) why.push_back("coupling support outside [0, 1]");
  if (alpha > std::numbers::pi * std::numbers::pi) why.push_back("alpha exceeds pi^2");
  if (cb.mu_tilde <= 0.0) {
    why.push_back("mu_tilde = 0 (coupling distribution degenerate at 0)");
  } else {
    cb.beta_max = beta_max(alpha, dist);
    if (beta > cb.beta_max) why.push_back("beta exceeds beta_max = sqrt(alpha*mu_tilde/10)");
    if (5.0 * beta * beta / alpha > 0.5 * cb.mu_tilde) why.push_back("5 beta^2/alpha exceeds mu_tilde/2");
  }
  cb.L_chosen = choose_L(E, beta);
  if (cb.L_chosen == 0) {
    why.push_back("L=0");
  } else {
    const double Ld = static_cast<double>(cb.L_chosen);
    if (Ld * Ld < alpha) why.push_back("L^2 < alpha");
    cb.free_count = free_neumann_count(Ld, E);
    if (cb.mu_tilde > 0.0) {
      const double threshold = options.sharp_threshold ? 5.0 * Ld * Ld * E / alpha : 0.5 * cb.mu_tilde;
      cb.ld_threshold = threshold;
      if (threshold < cb.mu_tilde) {
        cb.ld_factor = large_deviation_hoeffding(cb.mu_tilde, static_cast<int>(cb.L_chosen), threshold);
        cb.bound = static_cast<double>(cb.free_count) * *cb.ld_factor / Ld;
      } else {
        why.push_back("large-deviation threshold not below mu_tilde");
      }
    }
  }
  cb.valid = why.empty();
  return cb;
}

double mesh_slack_constant() {
  static const double c = [] {
    constexpr int m = 8;
    double worst = 0.0;
    for (int L = 2; L <= 20; ++L) {
      Realization r{L, std::vector<double>(static_cast<std::size_t>(L), 1.0), 0};
      const auto T = assemble(RandomPotential{SingleSiteModel::characteristic_breather(), r}, m);
      const double e2 = smallest_eigenvalues(T, 2)[1];
      const double exact = free_neumann_gap(L) + 1.0;
      worst = std::max(worst, std::abs(e2 - exact) * m);
    }
    return 2.0 * worst;
  }();
  return c;
}

}  // namespace lifshitz
