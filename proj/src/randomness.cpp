#include "lifshitz/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lifshitz/errors.hpp"
#include "lifshitz/parallel.hpp"

namespace lifshitz {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double unit_interval(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

CouplingDistribution::CouplingDistribution(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [&](const BernoulliCoupling& b) {
                   require(std::isfinite(b.p) && b.p >= 0.0 && b.p <= 1.0, "bernoulli: p must lie in [0, 1]");
                   lower_ = 0.0;
                   upper_ = 1.0;
                 },
                 [&](const UniformCoupling& u) {
                   require(std::isfinite(u.a) && std::isfinite(u.b), "uniform: bounds must be finite");
                   require(u.a <= u.b, "uniform: requires a <= b");
                   lower_ = u.a;
                   upper_ = u.b;
                 },
                 [&](const DiscreteCoupling& d) {
                   require(!d.values.empty(), "discrete: values must be non-empty");
                   require(d.values.size() == d.weights.size(), "discrete: values and weights differ in length");
                   double total = 0.0;
                   for (std::size_t i = 0; i < d.values.size(); ++i) {
                     require(std::isfinite(d.values[i]), "discrete: values must be finite");
                     require(std::isfinite(d.weights[i]) && d.weights[i] >= 0.0, "discrete: weights must be nonnegative");
                     total += d.weights[i];
                   }
                   require(total > 0.0, "discrete: weights must not all vanish");
                   cumulative_.resize(d.weights.size());
                   double running = 0.0;
                   lower_ = INFINITY;
                   upper_ = -INFINITY;
                   for (std::size_t i = 0; i < d.weights.size(); ++i) {
                     running += d.weights[i];
                     cumulative_[i] = running / total;
                     if (d.weights[i] > 0.0) {
                       lower_ = std::min(lower_, d.values[i]);
                       upper_ = std::max(upper_, d.values[i]);
                     }
                   }
                   cumulative_.back() = 1.0;
                 },
             },
             kind_);
}

CouplingDistribution CouplingDistribution::bernoulli(double p) { return CouplingDistribution(BernoulliCoupling{p}); }

CouplingDistribution CouplingDistribution::uniform(double a, double b) {
  return CouplingDistribution(UniformCoupling{a, b});
}

CouplingDistribution CouplingDistribution::discrete(std::vector<double> values, std::vector<double> weights) {
  return CouplingDistribution(DiscreteCoupling{std::move(values), std::move(weights)});
}

CouplingDistribution CouplingDistribution::point_mass(double value) { return discrete({value}, {1.0}); }

std::string CouplingDistribution::name() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const BernoulliCoupling& b) { os << "bernoulli(p=" << b.p << ")"; },
                 [&](const UniformCoupling& u) { os << "uniform(" << u.a << "," << u.b << ")"; },
                 [&](const DiscreteCoupling& d) {
                   os << "discrete(";
                   for (std::size_t i = 0; i < d.values.size(); ++i) {
                     os << (i ? "," : "") << d.values[i] << ":" << d.weights[i];
                   }
                   os << ")";
                 },
             },
             kind_);
  return os.str();
}

bool CouplingDistribution::is_point_mass() const {
  return std::visit(overloaded{
                        [](const BernoulliCoupling& b) { return b.p == 0.0 || b.p == 1.0; },
                        [](const UniformCoupling& u) { return u.a == u.b; },
                        [&](const DiscreteCoupling&) { return lower_ == upper_; },
                    },
                    kind_);
}

void CouplingDistribution::require_unit_support() const {
  require(lower_ >= 0.0 && upper_ <= 1.0,
          "coupling distribution " + name() + " must be supported in [0, 1] for the characteristic breather");
}

double CouplingDistribution::sample(std::mt19937_64& engine) const {
  const double u = unit_interval(engine);
  return std::visit(overloaded{
                        [&](const BernoulliCoupling& b) { return u < b.p ? 1.0 : 0.0; },
                        [&](const UniformCoupling& c) { return c.a + (c.b - c.a) * u; },
                        [&](const DiscreteCoupling& d) {
                          const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
                          const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
                              it - cumulative_.begin(), static_cast<std::ptrdiff_t>(d.values.size()) - 1));
                          return d.values[idx];
                        },
                    },
                    kind_);
}

double CouplingDistribution::mean_cutoff() const {
  return std::visit(overloaded{
                        [](const BernoulliCoupling& b) { return 0.5 * b.p; },
                        [](const UniformCoupling& u) {
                          if (u.b <= 0.5) return 0.5 * (u.a + u.b);
                          if (u.a >= 0.5) return 0.5;
                          // ∫_a^{1/2} x dx + (b - 1/2)/2, normalized by b - a
                          return (0.5 * (0.25 - u.a * u.a) + 0.5 * (u.b - 0.5)) / (u.b - u.a);
                        },
                        [&](const DiscreteCoupling& d) {
                          double acc = 0.0;
                          double prev = 0.0;
                          for (std::size_t i = 0; i < d.values.size(); ++i) {
                            acc += (cumulative_[i] - prev) * cutoff(d.values[i]);
                            prev = cumulative_[i];
                          }
                          return acc;
                        },
                    },
                    kind_);
}

double CouplingDistribution::mean() const {
  return std::visit(overloaded{
                        [](const BernoulliCoupling& b) { return b.p; },
                        [](const UniformCoupling& u) { return 0.5 * (u.a + u.b); },
                        [&](const DiscreteCoupling& d) {
                          double acc = 0.0;
                          double prev = 0.0;
                          for (std::size_t i = 0; i < d.values.size(); ++i) {
                            acc += (cumulative_[i] - prev) * d.values[i];
                            prev = cumulative_[i];
                          }
                          return acc;
                        },
                    },
                    kind_);
}

Realization sample_realization(const CouplingDistribution& dist, int L, std::uint64_t seed) {
  require(L >= 1, "sample_realization: L must be >= 1");
  Realization r;
  r.L = L;
  r.seed = seed;
  r.lambdas.resize(static_cast<std::size_t>(L));
  std::mt19937_64 engine(seed);
  for (auto& lambda : r.lambdas) lambda = dist.sample(engine);
  return r;
}

AverageStats averages(std::span<const double> lambdas) {
  AverageStats stats;
  if (lambdas.empty()) return stats;
  double sum = 0.0;
  double sum_cut = 0.0;
  for (double lambda : lambdas) {
    sum += lambda;
    sum_cut += cutoff(lambda);
  }
  const auto n = static_cast<double>(lambdas.size());
  stats.s_l = sum / n;
  stats.s_l_tilde = sum_cut / n;
  return stats;
}

AverageStats averages(const Realization& r) { return averages(std::span<const double>(r.lambdas)); }

AverageStats averages(const Realization& r, const CouplingDistribution& dist) {
  AverageStats stats = averages(r);
  stats.mu_tilde = dist.mean_cutoff();
  return stats;
}

ProbabilityEstimate wilson_interval(std::uint64_t hits, std::uint64_t samples) {
  require(samples >= 1, "wilson_interval: need at least one sample");
  constexpr double z = 1.959963984540054;
  ProbabilityEstimate est;
  est.hits = hits;
  est.samples = samples;
  const auto n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
  est.estimate = p;
  est.lower = std::max(0.0, centre - half);
  est.upper = std::min(1.0, centre + half);
  est.ci_half = half;
  return est;
}

ProbabilityEstimate large_deviation_empirical(const CouplingDistribution& dist, int L, double threshold,
                                              std::uint64_t R, std::uint64_t seed, unsigned threads) {
  require(R >= 1, "large_deviation_empirical: R must be >= 1");
  require(L >= 1, "large_deviation_empirical: L must be >= 1");
  const unsigned workers = resolve_threads(threads);
  std::vector<std::uint64_t> partial(workers, 0);
  parallel_chunks(R, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
    std::vector<double> lambdas(static_cast<std::size_t>(L));
    std::uint64_t hits = 0;
    for (std::size_t r = begin; r < end; ++r) {
      std::mt19937_64 engine(derive_seed(seed, r));
      for (auto& lambda : lambdas) lambda = dist.sample(engine);
      if (averages(lambdas).s_l_tilde <= threshold) ++hits;
    }
    partial[w] = hits;
  });
  return wilson_interval(std::accumulate(partial.begin(), partial.end(), std::uint64_t{0}), R);
}

double large_deviation_hoeffding(double mu_tilde, int L, double threshold) {
  require(L >= 0, "large_deviation_hoeffding: L must be >= 0");
  if (!(threshold < mu_tilde)) {
    throw ValidationError("large_deviation_hoeffding: threshold must lie strictly below mu_tilde (bound is vacuous)");
  }
  const double t = mu_tilde - threshold;
  return std::exp(-8.0 * static_cast<double>(L) * t * t);
}

}  // namespace lifshitz
