#include "lifshitz/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lifshitz/errors.hpp"

namespace lifshitz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double pivot_floor(const TridiagonalOperator& T) { return kEps * std::max(1.0, T.norm()); }

}  // namespace

std::size_t count_leq(const TridiagonalOperator& T, double E) {
  std::size_t count = 0;
  count_leq(T, std::span<const double>(&E, 1), std::span<std::size_t>(&count, 1));
  return count;
}

void count_leq(const TridiagonalOperator& T, std::span<const double> energies, std::span<std::size_t> counts) {
  require(counts.size() == energies.size(), "count_leq: energies and counts differ in length");
  const std::size_t k = energies.size();
  if (k == 0) return;
  const double pivmin = pivot_floor(T);

  // Pivots of the LDLᵀ factorization of T - E; a pivot <= 0 marks an eigenvalue <= E.
  // Pivots that vanish to working precision are replaced by -pivmin.
  std::vector<double> pivots(k);
  std::vector<std::size_t> negative(k, 0);
  for (std::size_t e = 0; e < k; ++e) {
    double d = T.diag[0] - energies[e];
    if (std::abs(d) < pivmin) d = -pivmin;
    negative[e] += d <= 0.0;
    pivots[e] = d;
  }
  for (std::size_t i = 1; i < T.n; ++i) {
    const double b2 = T.offdiag[i - 1] * T.offdiag[i - 1];
    const double a = T.diag[i];
    for (std::size_t e = 0; e < k; ++e) {
      double d = a - energies[e] - b2 / pivots[e];
      if (std::abs(d) < pivmin) d = -pivmin;
      negative[e] += d <= 0.0;
      pivots[e] = d;
    }
  }
  std::copy(negative.begin(), negative.end(), counts.begin());
}

std::pair<double, double> gershgorin_bounds(const TridiagonalOperator& T) {
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t i = 0; i < T.n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(T.offdiag[i - 1]);
    if (i + 1 < T.n) radius += std::abs(T.offdiag[i]);
    lo = std::min(lo, T.diag[i] - radius);
    hi = std::max(hi, T.diag[i] + radius);
  }
  return {lo, hi};
}

double default_tolerance(const TridiagonalOperator& T) { return 1e-10 * std::max(1.0, T.norm()); }

std::vector<double> smallest_eigenvalues(const TridiagonalOperator& T, std::size_t k, BisectionOptions options) {
  require(k >= 1 && k <= T.n, "smallest_eigenvalues: need 1 <= k <= n");
  const double tol = options.tol > 0.0 ? options.tol : default_tolerance(T);
  auto [glo, ghi] = gershgorin_bounds(T);
  // Widen slightly so count_leq(glo) == 0 and count_leq(ghi) == n despite rounding.
  const double pad = 2.0 * pivot_floor(T) * static_cast<double>(T.n) + tol;
  glo -= pad;
  ghi += pad;

  std::vector<double> out;
  out.reserve(k);
  double lower_start = glo;
  for (std::size_t idx = 1; idx <= k; ++idx) {
    double lo = lower_start;
    double hi = ghi;
    int iter = 0;
    while (hi - lo > tol) {
      if (++iter > options.max_iterations) {
        throw NonConvergenceError("smallest_eigenvalues: bisection for eigenvalue " + std::to_string(idx) +
                                  " did not reach tolerance within " + std::to_string(options.max_iterations) +
                                  " iterations");
      }
      const double mid = 0.5 * (lo + hi);
      if (count_leq(T, mid) >= idx) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.push_back(0.5 * (lo + hi));
    lower_start = lo;
  }
  return out;
}

std::vector<double> dense_oracle(const TridiagonalOperator& T) {
  require(T.n <= kDenseOracleMaxSize, "dense_oracle: n too large (limit 512)");
  const int n = static_cast<int>(T.n);
  std::vector<double> d(T.diag);
  std::vector<double> e(T.n, 0.0);
  for (int i = 0; i + 1 < n; ++i) e[static_cast<std::size_t>(i)] = T.offdiag[static_cast<std::size_t>(i)];

  auto at = [](std::vector<double>& v, int i) -> double& { return v[static_cast<std::size_t>(i)]; };
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(at(d, m)) + std::abs(at(d, m + 1));
        if (std::abs(at(e, m)) <= kEps * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw NonConvergenceError("dense_oracle: QL iteration did not converge");
        double g = (at(d, l + 1) - at(d, l)) / (2.0 * at(e, l));
        double r = std::hypot(g, 1.0);
        g = at(d, m) - at(d, l) + at(e, l) / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        bool deflated = false;
        for (; i >= l; --i) {
          const double f = s * at(e, i);
          const double b = c * at(e, i);
          r = std::hypot(f, g);
          at(e, i + 1) = r;
          if (r == 0.0) {
            at(d, i + 1) -= p;
            at(e, m) = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = at(d, i + 1) - p;
          r = (at(d, i) - g) * s + 2.0 * c * b;
          p = s * r;
          at(d, i + 1) = g + p;
          g = c * r - b;
        }
        if (deflated) continue;
        at(d, l) -= p;
        at(e, l) = g;
        at(e, m) = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace lifshitz
