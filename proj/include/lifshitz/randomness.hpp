#pragma once

// I.i.d. coupling constants, box averages and large-deviation probabilities.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lifshitz {

// Value 1 with probability p, value 0 otherwise.
struct BernoulliCoupling {
  double p;
};

struct UniformCoupling {
  double a;
  double b;
};

struct DiscreteCoupling {
  std::vector<double> values;
  std::vector<double> weights;
};

class CouplingDistribution {
 public:
  using Kind = std::variant<BernoulliCoupling, UniformCoupling, DiscreteCoupling>;

  static CouplingDistribution bernoulli(double p);
  static CouplingDistribution uniform(double a, double b);
  static CouplingDistribution discrete(std::vector<double> values, std::vector<double> weights);
  static CouplingDistribution point_mass(double value);

  const Kind& kind() const { return kind_; }
  std::string name() const;

  // Support bounds [λ₋, λ₊]. For bernoulli this is [0, 1] regardless of p.
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  bool is_point_mass() const;

  // Couplings of the characteristic breather must live in J = [0, 1].
  void require_unit_support() const;

  double sample(std::mt19937_64& engine) const;

  // E{min(λ, 1/2)}, closed form per kind.
  double mean_cutoff() const;
  double mean() const;

 private:
  explicit CouplingDistribution(Kind kind);

  Kind kind_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  std::vector<double> cumulative_;  // discrete only, normalized to 1
};

// Uniform double in [0, 1) from the top 53 bits; bit-identical on every platform.
double unit_interval(std::mt19937_64& engine);

// Seed of sample `index` in a batch driven by `master`. Order independent.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Couplings of the L cells tiling Λ_L = [-L/2, L/2]; entry j belongs to the
// cell [-L/2 + j, -L/2 + j + 1].
struct Realization {
  int L = 0;
  std::vector<double> lambdas;
  std::uint64_t seed = 0;
};

Realization sample_realization(const CouplingDistribution& dist, int L, std::uint64_t seed);

struct AverageStats {
  double s_l = 0.0;
  double s_l_tilde = 0.0;
  std::optional<double> mu_tilde;
};

inline double cutoff(double lambda) { return lambda < 0.5 ? lambda : 0.5; }

AverageStats averages(std::span<const double> lambdas);
AverageStats averages(const Realization& r);
AverageStats averages(const Realization& r, const CouplingDistribution& dist);

inline double mean_cutoff(const CouplingDistribution& dist) { return dist.mean_cutoff(); }

// 95% Wilson score interval for a binomial proportion.
struct ProbabilityEstimate {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double ci_half = 0.0;
};

ProbabilityEstimate wilson_interval(std::uint64_t hits, std::uint64_t samples);

// Fraction of R independent realizations with s_l_tilde <= threshold.
ProbabilityEstimate large_deviation_empirical(const CouplingDistribution& dist, int L, double threshold,
                                              std::uint64_t R, std::uint64_t seed, unsigned threads = 0);

// Hoeffding bound for the mean of L i.i.d. variables with range [0, 1/2]:
// P{S̃_L <= threshold} <= exp(-8 L (mu_tilde - threshold)^2). Throws when threshold >= mu_tilde.
double large_deviation_hoeffding(double mu_tilde, int L, double threshold);

}  // namespace lifshitz
