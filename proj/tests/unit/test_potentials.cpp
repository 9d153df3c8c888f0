#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lifshitz/errors.hpp"
#include "lifshitz/potentials.hpp"

using namespace lifshitz;

namespace {

Realization fixed(std::vector<double> lambdas) {
  Realization r;
  r.L = static_cast<int>(lambdas.size());
  r.lambdas = std::move(lambdas);
  return r;
}

// Midpoint sums of evaluate() with `sub` points per grid cell.
std::vector<double> riemann_averages(const RandomPotential& W, int m, int sub) {
  const int L = W.realization.L;
  const double h = 1.0 / m;
  std::vector<double> out(static_cast<std::size_t>(L * m));
  for (int i = 0; i < L * m; ++i) {
    const double x0 = -0.5 * L + i * h;
    double s = 0.0;
    for (int k = 0; k < sub; ++k) s += evaluate(W, x0 + (k + 0.5) * h / sub);
    out[static_cast<std::size_t>(i)] = s / sub;
  }
  return out;
}

}  // namespace

TEST_CASE("single-site values") {
  const auto cb = SingleSiteModel::characteristic_breather();
  CHECK(cb.value(0.5, 0.3) == 1.0);
  CHECK(cb.value(0.5, 0.7) == 0.0);
  CHECK(cb.value(0.5, 0.5) == 1.0);
  CHECK(cb.value(0.5, 0.0) == 0.0);
  const auto alloy = SingleSiteModel::alloy(Profile::indicator(-0.5, 0.5));
  CHECK(alloy.value(0.25, 0.5) == 0.25);
  const auto sb = SingleSiteModel::smooth_breather(Profile::quartic_bump(), 0.5);
  CHECK(sb.value(0.5, 0.5) == 1.0);
  CHECK(sb.value(0.5, 0.5 + 0.25) == doctest::Approx(0.0));
  CHECK(sb.value(1.0, 0.5 + 0.25) == doctest::Approx(0.5625));
}

TEST_CASE("profile integrals") {
  const auto ind = Profile::indicator(0.0, 0.5, 2.0);
  CHECK(ind.total_integral() == 1.0);
  CHECK(ind.integral_of_square() == 2.0);
  CHECK(ind.integral(-1.0, 0.25) == 0.5);
  const auto bump = Profile::quartic_bump();
  // ∫(1-4x²)² over [-1/2, 1/2] = 8/15, ∫(1-4x²)⁴ = 128/315
  CHECK(bump.total_integral() == doctest::Approx(8.0 / 15.0).epsilon(1e-12));
  CHECK(bump.integral_of_square() == doctest::Approx(128.0 / 315.0).epsilon(1e-10));
  const auto tent = Profile::from_csv(LIFSHITZ_TEST_DATA_DIR "/tent.csv");
  CHECK(tent(0.25) == doctest::Approx(0.5));
  CHECK(tent.total_integral() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tent.integral(0.0, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(Profile::from_csv(LIFSHITZ_TEST_DATA_DIR "/missing.csv"), ValidationError);
}

TEST_CASE("random potential evaluation") {
  const RandomPotential W{SingleSiteModel::characteristic_breather(), fixed({0.5, 0.25, 1.0, 0.0})};
  CHECK(evaluate(W, -2.0 + 0.3) == 1.0);
  CHECK(evaluate(W, -2.0 + 0.7) == 0.0);
  CHECK(evaluate(W, -1.0 + 0.2) == 1.0);
  CHECK(evaluate(W, 0.9) == 1.0);
  CHECK(evaluate(W, 1.5) == 0.0);
  CHECK_THROWS_AS(evaluate(W, 2.5), ValidationError);
  CHECK_THROWS_AS(evaluate(W, -2.01), ValidationError);
}

TEST_CASE("evaluate depends only on the local coupling") {
  const auto model = SingleSiteModel::alloy(Profile::quartic_bump());
  const auto base = sample_realization(CouplingDistribution::uniform(0, 1), 6, 3);
  const RandomPotential W{model, base};
  for (double x : {-2.7, -1.1, 0.2, 1.6, 2.9}) {
    const std::size_t j = W.cell_of(x);
    auto other = base;
    for (std::size_t k = 0; k < other.lambdas.size(); ++k) {
      if (k != j) other.lambdas[k] = 1.0 - other.lambdas[k];
    }
    CHECK(evaluate(RandomPotential{model, other}, x) == evaluate(W, x));
  }
}

TEST_CASE("raising a coupling never lowers the breather potential") {
  const auto model = SingleSiteModel::characteristic_breather();
  const auto r = sample_realization(CouplingDistribution::uniform(0, 1), 5, 11);
  for (std::size_t k = 0; k < 5; ++k) {
    auto up = r;
    up.lambdas[k] = std::min(1.0, up.lambdas[k] + 0.3);
    for (int i = 0; i <= 500; ++i) {
      const double x = -2.5 + 5.0 * i / 500;
      CHECK(evaluate(RandomPotential{model, up}, x) >= evaluate(RandomPotential{model, r}, x));
    }
  }
}

TEST_CASE("cell averages") {
  const auto cb = SingleSiteModel::characteristic_breather();
  auto avg = cell_averages(RandomPotential{cb, fixed({0.5})}, 4);
  CHECK(avg == std::vector<double>{1.0, 1.0, 0.0, 0.0});
  avg = cell_averages(RandomPotential{cb, fixed({0.3})}, 2);
  CHECK(avg[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(avg[1] == 0.0);
  const auto alloy = SingleSiteModel::alloy(Profile::indicator(-0.5, 0.5));
  for (double v : cell_averages(RandomPotential{alloy, fixed({0, 0, 0})}, 8)) CHECK(v == 0.0);
}

TEST_CASE("breather cell averages have mean m1") {
  const auto cb = SingleSiteModel::characteristic_breather();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomPotential W{cb, sample_realization(CouplingDistribution::uniform(0, 1), 3 + static_cast<int>(seed), seed)};
    const auto avg = cell_averages(W, 32);
    double mean = 0.0;
    for (double v : avg) mean += v;
    mean /= static_cast<double>(avg.size());
    CHECK(std::abs(mean - moments(W).m1) < 1e-10);
  }
}

TEST_CASE("smooth cell averages agree with fine Riemann sums") {
  const int m = 32;
  const auto check = [&](const SingleSiteModel& model, const Realization& r) {
    const RandomPotential W{model, r};
    const auto exact = cell_averages(W, m);
    const auto fine = riemann_averages(W, m, 64);
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
      scale = std::max(scale, std::abs(exact[i]));
      diff = std::max(diff, std::abs(exact[i] - fine[i]));
    }
    CHECK(diff <= 1e-6 * scale);
  };
  check(SingleSiteModel::alloy(Profile::quartic_bump()), sample_realization(CouplingDistribution::uniform(0, 1), 3, 8));
  check(SingleSiteModel::smooth_breather(Profile::quartic_bump(), 0.5),
        sample_realization(CouplingDistribution::uniform(0.5, 1), 4, 9));
}

TEST_CASE("moments in the constant state") {
  const auto cb = SingleSiteModel::characteristic_breather();
  auto mo = moments(RandomPotential{cb, fixed({0.5, 0.5})});
  CHECK(mo.m1 == 0.5);
  CHECK(mo.m2 == 0.5);
  const auto alloy = SingleSiteModel::alloy(Profile::indicator(0.0, 0.5, 2.0));
  mo = moments(RandomPotential{alloy, fixed({1.0, 0.0})});
  CHECK(mo.m1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mo.m2 == doctest::Approx(1.0).epsilon(1e-15));
  mo = moments(RandomPotential{alloy, fixed({0.0, 0.0, 0.0})});
  CHECK(mo.m1 == 0.0);
  CHECK(mo.m2 == 0.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = sample_realization(CouplingDistribution::uniform(0, 1), 7, seed);
    mo = moments(RandomPotential{cb, r});
    CHECK(mo.m1 == mo.m2);
  }
}

TEST_CASE("tabulated model interpolates bilinearly") {
  // u(λ, x) = λ·(1 - 2|x|) sampled exactly on a grid
  const std::vector<double> lambdas{0.0, 0.5, 1.0};
  const std::vector<double> xs{-0.5, 0.0, 0.5};
  std::vector<double> values;
  for (double l : lambdas) {
    for (double x : xs) values.push_back(l * (1.0 - 2.0 * std::abs(x)));
  }
  const auto tab = SingleSiteModel::tabulated(lambdas, xs, values);
  CHECK(tab.value(0.75, 0.5) == doctest::Approx(0.75));
  CHECK(tab.value(0.25, 0.75) == doctest::Approx(0.125));
  CHECK(tab.cell_integral(1.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(SingleSiteModel::tabulated(lambdas, xs, {1.0, 2.0}), ValidationError);
}

TEST_CASE("hypothesis checker: alloy with indicator profile") {
  const auto rep = check_hypothesis_a(SingleSiteModel::alloy(Profile::indicator(-0.5, 0.5)), 17, 33);
  CHECK(rep.passes);
  CHECK(rep.violations.empty());
  REQUIRE(rep.epsilon1);
  REQUIRE(rep.kappa);
  CHECK(*rep.epsilon1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*rep.kappa == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*rep.epsilon2 == doctest::Approx(0.5));
  CHECK(rep.lambda_grid == 17);
  CHECK(rep.x_grid == 33);
}

TEST_CASE("hypothesis checker: characteristic breather fails only the Lipschitz clause") {
  const auto rep = check_hypothesis_a(SingleSiteModel::characteristic_breather(), 33, 33);
  CHECK_FALSE(rep.passes);
  REQUIRE_FALSE(rep.violations.empty());
  for (const auto& v : rep.violations) CHECK(v.clause == "lipschitz");
  // the witness: u - u(λ₋, ·) = 1 at a point where κλ is small
  const auto& w = rep.violations.front();
  CHECK(w.lambda > 0.0);
  CHECK(w.lambda < 0.1);
  CHECK(SingleSiteModel::characteristic_breather().value(w.lambda, w.x + 0.5) == 1.0);
}

TEST_CASE("hypothesis checker: smooth breather is monotone") {
  const auto rep = check_hypothesis_a(SingleSiteModel::smooth_breather(Profile::quartic_bump(), 0.5), 17, 33);
  for (const auto& v : rep.violations) CHECK(v.clause != "monotonicity");
  CHECK(rep.passes);
  // -x f'(x) = 16x²(1-4x²) ≥ 0 is the monotonicity in λ
  for (double x = -0.5; x <= 0.5; x += 0.01) CHECK(16 * x * x * (1 - 4 * x * x) >= 0.0);
}

TEST_CASE("hypothesis checker: decreasing model fails monotonicity") {
  const auto rep = check_hypothesis_a(SingleSiteModel::alloy(Profile::indicator(-0.5, 0.5, -1.0)), 16, 16);
  CHECK_FALSE(rep.passes);
  CHECK(std::any_of(rep.violations.begin(), rep.violations.end(),
                    [](const HypothesisViolation& v) { return v.clause == "monotonicity"; }));
  CHECK_THROWS_AS(check_hypothesis_a(SingleSiteModel::characteristic_breather(), 8, 16), ValidationError);
}
