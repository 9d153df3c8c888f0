#include <doctest.h>

#include <cmath>
#include <numeric>

#include "lifshitz/errors.hpp"
#include "lifshitz/randomness.hpp"

using namespace lifshitz;

TEST_CASE("bernoulli p=1 gives all ones") {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const auto r = sample_realization(CouplingDistribution::bernoulli(1.0), 4, seed);
    CHECK(r.lambdas == std::vector<double>{1, 1, 1, 1});
  }
}

TEST_CASE("uniform(0,1) sample mean") {
  const auto r = sample_realization(CouplingDistribution::uniform(0.0, 1.0), 100000, 1);
  const double mean = std::accumulate(r.lambdas.begin(), r.lambdas.end(), 0.0) / r.L;
  CHECK(std::abs(mean - 0.5) < 0.01);
  for (double x : r.lambdas) CHECK_UNARY(x >= 0.0 && x < 1.0);
}

TEST_CASE("discrete fraction of ones") {
  const auto r = sample_realization(CouplingDistribution::discrete({0.0, 1.0}, {0.5, 0.5}), 100000, 3);
  const double ones = static_cast<double>(std::count(r.lambdas.begin(), r.lambdas.end(), 1.0)) / r.L;
  CHECK(std::abs(ones - 0.5) < 0.01);
}

TEST_CASE("realizations are reproducible and seed dependent") {
  const auto d = CouplingDistribution::uniform(0.2, 0.9);
  const auto a = sample_realization(d, 50, 12345);
  const auto b = sample_realization(d, 50, 12345);
  const auto c = sample_realization(d, 50, 12346);
  CHECK(a.lambdas == b.lambdas);
  CHECK(a.lambdas != c.lambdas);
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  CHECK(derive_seed(7, 3) != derive_seed(7, 4));
  CHECK(derive_seed(7, 3) != derive_seed(8, 3));
}

TEST_CASE("invalid distribution parameters") {
  CHECK_THROWS_AS(CouplingDistribution::bernoulli(1.5), ValidationError);
  CHECK_THROWS_AS(CouplingDistribution::bernoulli(-0.1), ValidationError);
  CHECK_THROWS_AS(CouplingDistribution::uniform(0.8, 0.2), ValidationError);
  CHECK_THROWS_AS(CouplingDistribution::discrete({0.0, 1.0}, {0.5, -0.5}), ValidationError);
  CHECK_THROWS_AS(CouplingDistribution::discrete({0.0, 1.0}, {0.5}), ValidationError);
  CHECK_THROWS_AS(sample_realization(CouplingDistribution::uniform(0, 1), 0, 1), ValidationError);
  CHECK_THROWS_AS(CouplingDistribution::uniform(-1.0, 0.5).require_unit_support(), ValidationError);
  CHECK_NOTHROW(CouplingDistribution::bernoulli(0.3).require_unit_support());
}

TEST_CASE("box averages") {
  auto s = averages(std::vector<double>{0.2, 0.8, 1.0, 0.4});
  CHECK(s.s_l == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(s.s_l_tilde == doctest::Approx(0.4).epsilon(1e-15));
  s = averages(std::vector<double>{0.0, 0.0});
  CHECK(s.s_l == 0.0);
  CHECK(s.s_l_tilde == 0.0);
  s = averages(std::vector<double>{1, 1, 1, 1});
  CHECK(s.s_l == 1.0);
  CHECK(s.s_l_tilde == 0.5);
  const auto r = sample_realization(CouplingDistribution::uniform(0, 1), 40, 5);
  CHECK(averages(r, CouplingDistribution::uniform(0, 1)).mu_tilde.value() == 0.375);
}

TEST_CASE("s_l_tilde never exceeds one half for unit support") {
  const auto d = CouplingDistribution::uniform(0, 1);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CHECK(averages(sample_realization(d, 1 + static_cast<int>(seed % 37), seed)).s_l_tilde <= 0.5);
  }
}

TEST_CASE("cut-off mean") {
  CHECK(CouplingDistribution::uniform(0, 1).mean_cutoff() == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(CouplingDistribution::bernoulli(0.5).mean_cutoff() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(CouplingDistribution::point_mass(0.3).mean_cutoff() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(CouplingDistribution::uniform(0.6, 0.9).mean_cutoff() == doctest::Approx(0.5).epsilon(1e-15));
  // uniform(0.2, 0.8): (∫_{0.2}^{0.5} x dx + 0.5·0.3) / 0.6
  CHECK(CouplingDistribution::uniform(0.2, 0.8).mean_cutoff() == doctest::Approx((0.105 + 0.15) / 0.6).epsilon(1e-14));
}

TEST_CASE("empirical large deviation probabilities") {
  const auto bern = CouplingDistribution::bernoulli(0.5);
  const auto p = large_deviation_empirical(bern, 4, 0.125, 100000, 17, 1);
  CHECK(std::abs(p.estimate - 5.0 / 16.0) <= p.ci_half);
  CHECK(p.lower <= 5.0 / 16.0);
  CHECK(p.upper >= 5.0 / 16.0);

  CHECK(large_deviation_empirical(CouplingDistribution::point_mass(1.0), 10, 0.25, 1000, 1).estimate == 0.0);
  CHECK(large_deviation_empirical(CouplingDistribution::uniform(0, 1), 10, 0.5, 1000, 1).estimate == 1.0);
  CHECK(large_deviation_empirical(bern, 6, 0.6, 500, 9).hits == 500);
}

TEST_CASE("empirical probability does not depend on thread count") {
  const auto d = CouplingDistribution::uniform(0, 1);
  const auto a = large_deviation_empirical(d, 8, 0.2, 5000, 4, 1);
  const auto b = large_deviation_empirical(d, 8, 0.2, 5000, 4, 3);
  CHECK(a.hits == b.hits);
}

TEST_CASE("hoeffding bound") {
  CHECK(large_deviation_hoeffding(0.375, 9, 0.1875) == doctest::Approx(std::exp(-2.53125)).epsilon(1e-15));
  CHECK(large_deviation_hoeffding(0.375, 9, 0.1875) == doctest::Approx(0.0795).epsilon(1e-3));
  CHECK_THROWS_AS(large_deviation_hoeffding(0.3, 5, 0.3), ValidationError);
  CHECK(large_deviation_hoeffding(0.25, 0, 0.125) == 1.0);
  // log of the bound is linear in L
  const double l1 = std::log(large_deviation_hoeffding(0.25, 4, 0.125));
  const double l2 = std::log(large_deviation_hoeffding(0.25, 8, 0.125));
  const double l4 = std::log(large_deviation_hoeffding(0.25, 16, 0.125));
  CHECK(l2 == doctest::Approx(2 * l1).epsilon(1e-14));
  CHECK(l4 == doctest::Approx(4 * l1).epsilon(1e-14));
}

TEST_CASE("empirical probability respects hoeffding and decays under doubling") {
  for (const auto& d : {CouplingDistribution::bernoulli(0.5), CouplingDistribution::uniform(0, 1)}) {
    const double mu = d.mean_cutoff();
    double previous = 1.0;
    double previous_ci = 0.0;
    for (int L : {4, 8, 16}) {
      const auto p = large_deviation_empirical(d, L, mu / 2, 20000, 100 + L, 1);
      CHECK(p.estimate <= large_deviation_hoeffding(mu, L, mu / 2) + p.ci_half);
      CHECK(p.estimate <= previous + previous_ci + p.ci_half);
      previous = p.estimate;
      previous_ci = p.ci_half;
    }
  }
}

TEST_CASE("wilson interval edge cases") {
  const auto zero = wilson_interval(0, 100);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.lower < 1e-15);
  CHECK(zero.upper > 0.0);
  const auto all = wilson_interval(100, 100);
  CHECK(all.upper == doctest::Approx(1.0));
  CHECK(all.lower < 1.0);
}
