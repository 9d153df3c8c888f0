#pragma once

// Single-site models u(λ, x), the random potential W_ω = Σ_k u(λ_k, x - k),
// exact grid-cell averages, moments in the constant state, and a grid checker
// for the monotonicity hypothesis.
//
// Coordinates: every model is evaluated in cell-local t ∈ [0, 1]. Alloy and
// smooth-breather profiles are centered, f is given on Λ₁ = [-1/2, 1/2] and
// u(λ, t) is built from f(t - 1/2). The characteristic breather is
// χ_{]0, λ]}(t).

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lifshitz/randomness.hpp"

namespace lifshitz {

class Profile {
 public:
  // height · χ_{[lo, hi]}
  static Profile indicator(double lo, double hi, double height = 1.0);
  // (1 - 4x²)² on [-1/2, 1/2]
  static Profile quartic_bump();
  // Piecewise linear through (x_i, f_i), zero outside [x_0, x_last].
  static Profile piecewise_linear(std::vector<double> xs, std::vector<double> fs);
  // Two-column CSV (x, f(x)); a header line is allowed.
  static Profile from_csv(const std::string& path);
  // Arbitrary smooth profile supported in [lo, hi]; integrals by adaptive quadrature.
  static Profile smooth(std::string name, std::function<double(double)> f, double lo, double hi, double sup_norm);

  double operator()(double x) const;
  double integral(double lo, double hi) const;
  double integral_of_square() const;
  double total_integral() const { return integral(support_lo_, support_hi_); }
  double sup_norm() const { return sup_norm_; }
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }
  // Points where f or f' may jump. Quadrature splits there.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::string& name() const { return name_; }

 private:
  enum class Kind { indicator, piecewise_linear, smooth };
  Profile() = default;

  Kind kind_ = Kind::smooth;
  std::string name_;
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
  double height_ = 0.0;
  double sup_norm_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> fs_;
  std::vector<double> breakpoints_;
  std::function<double(double)> fn_;
};

// Adaptive Gauss–Kronrod over [lo, hi], split at the given breakpoints.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const std::vector<double>& breakpoints = {}, double rel_tol = 1e-10);

struct AlloyModel {
  Profile f;
};

// u(λ, x) = f(x / λ), x centered; requires λ > 0.
struct SmoothBreatherModel {
  Profile f;
};

struct CharacteristicBreatherModel {};

// u(λ_i, x_j) samples on a rectangular grid, bilinear in between; x centered, zero outside [x_0, x_last].
struct TabulatedModel {
  std::vector<double> lambdas;
  std::vector<double> xs;
  std::vector<double> values;  // row-major, values[i * xs.size() + j] = u(lambdas[i], xs[j])
};

struct CouplingRange {
  double lower = 0.0;
  double upper = 1.0;
};

class SingleSiteModel {
 public:
  using Kind = std::variant<AlloyModel, SmoothBreatherModel, CharacteristicBreatherModel, TabulatedModel>;

  static SingleSiteModel alloy(Profile f, CouplingRange range = {});
  static SingleSiteModel smooth_breather(Profile f, double lambda_min, double lambda_max = 1.0);
  static SingleSiteModel characteristic_breather();
  static SingleSiteModel tabulated(std::vector<double> lambdas, std::vector<double> xs, std::vector<double> values);

  const Kind& kind() const { return kind_; }
  bool is_characteristic_breather() const { return std::holds_alternative<CharacteristicBreatherModel>(kind_); }
  std::string name() const;
  const CouplingRange& coupling_range() const { return range_; }

  // u(λ, t), t cell-local; defined (possibly zero) for every real t.
  double value(double lambda, double t) const;
  // ∫_{t0}^{t1} u(λ, t) dt
  double integral(double lambda, double t0, double t1) const;
  double cell_integral(double lambda) const { return integral(lambda, 0.0, 1.0); }
  double cell_integral_of_square(double lambda) const;

 private:
  SingleSiteModel(Kind kind, CouplingRange range) : kind_(std::move(kind)), range_(range) {}

  Kind kind_;
  CouplingRange range_;
};

struct RandomPotential {
  SingleSiteModel model;
  Realization realization;

  double half_length() const { return 0.5 * realization.L; }
  // Index j of the cell [-L/2 + j, -L/2 + j + 1) containing x; the last cell is closed.
  std::size_t cell_of(double x) const;
};

double evaluate(const RandomPotential& W, double x);

// Mean of W over each of the n = L·m grid cells [x_i, x_i + h], x_i = -L/2 + i h.
std::vector<double> cell_averages(const RandomPotential& W, int m);

struct Moments {
  double m1 = 0.0;  // ⟨ψ, W ψ⟩
  double m2 = 0.0;  // ⟨W ψ, W ψ⟩
};

// Moments in ψ = L^{-1/2} χ_{Λ_L}.
Moments moments(const RandomPotential& W);

struct HypothesisViolation {
  std::string clause;  // "support", "monotonicity", "integral_lower_bound", "lipschitz"
  double lambda = 0.0;
  double x = 0.0;  // centered coordinate
  std::string detail;
};

struct HypothesisAReport {
  bool passes = false;
  std::optional<double> epsilon1;
  std::optional<double> epsilon2;
  std::optional<double> kappa;
  std::vector<HypothesisViolation> violations;
  int lambda_grid = 0;
  int x_grid = 0;
};

HypothesisAReport check_hypothesis_a(const SingleSiteModel& model, int lambda_grid, int x_grid);

}  // namespace lifshitz
