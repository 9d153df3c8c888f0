#include "lifshitz/ids.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "lifshitz/eigensolve.hpp"
#include "lifshitz/errors.hpp"
#include "lifshitz/parallel.hpp"

namespace lifshitz {

namespace {

constexpr double kZ95 = 1.959963984540054;

TridiagonalOperator assemble_sample(const SingleSiteModel& model, const Realization& r, int m, double shift) {
  const RandomPotential W{model, r};
  return assemble(W, m, shift);
}

// Counts at every grid energy; skips the sweep when nothing lies below the top energy.
void sample_counts(const TridiagonalOperator& T, const std::vector<double>& grid, std::vector<std::size_t>& counts) {
  std::fill(counts.begin(), counts.end(), 0);
  if (count_leq(T, grid.back()) == 0) return;
  count_leq(T, grid, counts);
}

}  // namespace

std::vector<double> geometric_grid(double e_max, double ratio, int points) {
  require(e_max > 0.0, "geometric_grid: e_max must be positive");
  require(ratio > 0.0 && ratio < 1.0, "geometric_grid: ratio must lie in (0, 1)");
  require(points >= 1, "geometric_grid: need at least one point");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) grid[static_cast<std::size_t>(points - 1 - j)] = e_max * std::pow(ratio, j);
  return grid;
}

std::vector<double> realization_counts(const SingleSiteModel& model, const Realization& r, int m,
                                       const std::vector<double>& grid, double shift) {
  const auto T = assemble_sample(model, r, m, shift);
  std::vector<std::size_t> counts(grid.size());
  count_leq(T, grid, counts);
  std::vector<double> out(grid.size());
  for (std::size_t e = 0; e < grid.size(); ++e) out[e] = static_cast<double>(counts[e]) / r.L;
  return out;
}

IdsEstimate estimate_ids(const SingleSiteModel& model, const CouplingDistribution& dist, int L, int m,
                         std::vector<double> grid, std::uint64_t R, std::uint64_t seed, IdsOptions options) {
  require(R >= 1, "estimate_ids: R must be >= 1");
  require(L >= 1, "estimate_ids: L must be >= 1");
  require(!grid.empty(), "estimate_ids: energy grid is empty");
  require(std::is_sorted(grid.begin(), grid.end()), "estimate_ids: energy grid must be ascending");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t k = grid.size();

  const unsigned workers = resolve_threads(options.threads);
  // Integer sums are exact, so the result does not depend on the thread count.
  std::vector<std::vector<std::uint64_t>> sum(workers, std::vector<std::uint64_t>(k, 0));
  std::vector<std::vector<std::uint64_t>> sum_sq(workers, std::vector<std::uint64_t>(k, 0));
  parallel_chunks(R, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
    std::vector<std::size_t> counts(k);
    for (std::size_t r = begin; r < end; ++r) {
      const auto realization = sample_realization(dist, L, derive_seed(seed, r));
      const auto T = assemble_sample(model, realization, m, options.shift);
      sample_counts(T, grid, counts);
      for (std::size_t e = 0; e < k; ++e) {
        sum[w][e] += counts[e];
        sum_sq[w][e] += static_cast<std::uint64_t>(counts[e]) * counts[e];
      }
    }
  });

  IdsEstimate est;
  est.L = L;
  est.m = m;
  est.R = R;
  est.seed = seed;
  est.grid = std::move(grid);
  est.n_hat.resize(k);
  est.ci_half.resize(k);
  const auto Rd = static_cast<double>(R);
  const auto Ld = static_cast<double>(L);
  for (std::size_t e = 0; e < k; ++e) {
    std::uint64_t s = 0;
    std::uint64_t s2 = 0;
    for (unsigned w = 0; w < workers; ++w) {
      s += sum[w][e];
      s2 += sum_sq[w][e];
    }
    const double mean = static_cast<double>(s) / Rd;
    est.n_hat[e] = mean / Ld;
    if (R < 2) {
      est.ci_half[e] = std::numeric_limits<double>::infinity();
    } else {
      const double var = std::max(0.0, (static_cast<double>(s2) - static_cast<double>(s) * mean) / (Rd - 1.0));
      est.ci_half[e] = kZ95 * std::sqrt(var / Rd) / Ld;
    }
  }
  est.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return est;
}

LifshitzFit fit_lifshitz_exponent(const IdsEstimate& est, double E0) {
  require(est.grid.size() == est.n_hat.size() && est.grid.size() == est.ci_half.size(),
          "fit_lifshitz_exponent: estimate columns differ in length");
  LifshitzFit fit;
  fit.E0 = E0;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    const double n = est.n_hat[i];
    const double E = est.grid[i];
    if (!(E > E0) || !(n > 0.0) || !(n < 1.0) || !(n > fit.admissibility_factor * est.ci_half[i])) continue;
    xs.push_back(std::log(E - E0));
    ys.push_back(std::log(std::abs(std::log(n))));
    if (xs.size() == 1) {
      fit.e_lo = fit.e_hi = E;
    } else {
      fit.e_lo = std::min(fit.e_lo, E);
      fit.e_hi = std::max(fit.e_hi, E);
    }
  }
  const std::size_t count = xs.size();
  if (count < 4) {
    throw ValidationError("fit_lifshitz_exponent: fewer than 4 admissible points (have " + std::to_string(count) + ")");
  }
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  if (*ymin == *ymax) throw ValidationError("fit_lifshitz_exponent: no admissible variation in n_hat");

  const auto nd = static_cast<double>(count);
  double xbar = 0.0;
  double ybar = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= nd;
  ybar /= nd;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  require(sxx > 0.0, "fit_lifshitz_exponent: energies of admissible points coincide");
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ssr = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double res = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ssr += res * res;
  }
  const double se = std::sqrt(ssr / (nd - 2.0) / sxx);
  const boost::math::students_t t(nd - 2.0);
  fit.slope_ci = boost::math::quantile(boost::math::complement(t, 0.025)) * se;
  fit.points_used = count;
  return fit;
}

FiniteVolumeBoundReport finite_volume_bound_check(const SingleSiteModel& model, const CouplingDistribution& dist,
                                                  int L, int m, double E, std::uint64_t R, std::uint64_t seed,
                                                  IdsOptions options) {
  require(R >= 1, "finite_volume_bound_check: R must be >= 1");
  require(L >= 1, "finite_volume_bound_check: L must be >= 1");
  const unsigned workers = resolve_threads(options.threads);
  std::vector<std::uint64_t> sum(workers, 0);
  std::vector<std::uint64_t> sum_sq(workers, 0);
  std::vector<std::uint64_t> below(workers, 0);
  parallel_chunks(R, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto realization = sample_realization(dist, L, derive_seed(seed, r));
      const auto T = assemble_sample(model, realization, m, options.shift);
      const std::size_t c = count_leq(T, E);
      sum[w] += c;
      sum_sq[w] += static_cast<std::uint64_t>(c) * c;
      below[w] += c >= 1;
    }
  });
  std::uint64_t s = 0;
  std::uint64_t s2 = 0;
  std::uint64_t hits = 0;
  for (unsigned w = 0; w < workers; ++w) {
    s += sum[w];
    s2 += sum_sq[w];
    hits += below[w];
  }
  FiniteVolumeBoundReport rep;
  rep.E = E;
  rep.L = L;
  rep.m = m;
  rep.R = R;
  const auto Rd = static_cast<double>(R);
  const auto Ld = static_cast<double>(L);
  const double mean = static_cast<double>(s) / Rd;
  rep.left = mean / Ld;
  rep.left_ci = R < 2 ? 0.0
                      : kZ95 *
                            std::sqrt(std::max(0.0, (static_cast<double>(s2) - static_cast<double>(s) * mean) /
                                                        (Rd - 1.0)) /
                                      Rd) /
                            Ld;
  rep.ground_state_below = wilson_interval(hits, R);
  rep.free_count = free_neumann_count(Ld, E);
  rep.right = static_cast<double>(rep.free_count) * rep.ground_state_below.estimate / Ld;
  rep.right_ci = static_cast<double>(rep.free_count) * rep.ground_state_below.ci_half / Ld;
  rep.holds = rep.left <= rep.right + rep.left_ci + rep.right_ci;
  return rep;
}

void write_csv(const IdsEstimate& est, std::ostream& out) {
  out << "E,n_hat,ci_half,R,L,m,seed\n";
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    out << est.grid[i] << ',' << est.n_hat[i] << ',' << est.ci_half[i] << ',' << est.R << ',' << est.L << ','
        << est.m << ',' << est.seed << '\n';
  }
  out.precision(old);
}

IdsEstimate read_ids_csv(std::istream& in) {
  IdsEstimate est;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line.rfind("E,", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    std::string e_s, n_s, ci_s;
    std::uint64_t R = 0;
    int L = 0;
    int m = 0;
    std::uint64_t seed = 0;
    if (!(is >> e_s >> n_s >> ci_s >> R >> L >> m >> seed)) {
      throw ValidationError("ids csv: malformed row " + std::to_string(row));
    }
    est.grid.push_back(std::stod(e_s));
    est.n_hat.push_back(std::stod(n_s));
    est.ci_half.push_back(std::stod(ci_s));
    est.R = R;
    est.L = L;
    est.m = m;
    est.seed = seed;
  }
  require(!est.grid.empty(), "ids csv: no data rows");
  return est;
}

}  // namespace lifshitz
