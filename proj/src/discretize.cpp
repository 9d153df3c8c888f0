#include "lifshitz/discretize.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "lifshitz/errors.hpp"

namespace lifshitz {

double TridiagonalOperator::norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(offdiag[i - 1]);
    if (i + 1 < n) row += std::abs(offdiag[i]);
    best = std::max(best, row);
  }
  return best;
}

TridiagonalOperator assemble_from_cell_values(double L, std::span<const double> potential, double shift,
                                              std::string meta) {
  const std::size_t n = potential.size();
  require(n >= 2, "assemble: need at least two grid cells");
  require(L > 0.0, "assemble: L must be positive");
  TridiagonalOperator T;
  T.n = n;
  T.L = L;
  T.h = L / static_cast<double>(n);
  T.meta = std::move(meta);
  const double inv_h2 = 1.0 / (T.h * T.h);
  T.diag.resize(n);
  T.offdiag.assign(n - 1, -inv_h2);
  for (std::size_t i = 0; i < n; ++i) {
    const double stencil = (i == 0 || i + 1 == n) ? inv_h2 : 2.0 * inv_h2;
    T.diag[i] = stencil + potential[i] + shift;
  }
  return T;
}

TridiagonalOperator assemble(const RandomPotential& W, int m, double shift) {
  require(m >= 2, "assemble: m must be >= 2");
  const auto values = cell_averages(W, m);
  return assemble_from_cell_values(static_cast<double>(W.realization.L), values, shift,
                                   W.model.name() + ", m=" + std::to_string(m));
}

std::vector<double> free_neumann_spectrum_continuum(double L, int j_max) {
  require(L > 0.0, "free_neumann_spectrum_continuum: L must be positive");
  std::vector<double> levels;
  for (int j = 0; j <= j_max; ++j) {
    const double k = std::numbers::pi * j / L;
    levels.push_back(k * k);
  }
  return levels;
}

std::vector<double> free_neumann_levels_up_to(double L, double E) {
  const long count = free_neumann_count(L, E);
  if (count == 0) return {};
  return free_neumann_spectrum_continuum(L, static_cast<int>(count - 1));
}

long free_neumann_count(double L, double E) {
  require(L > 0.0, "free_neumann_count: L must be positive");
  if (!(E >= 0.0)) return 0;
  auto level = [L](long j) {
    const double k = std::numbers::pi * static_cast<double>(j) / L;
    return k * k;
  };
  // ⌊L√E/π⌋ + 1, with the floor corrected against the level formula itself.
  long j = static_cast<long>(std::floor(L * std::sqrt(E) / std::numbers::pi));
  while (j > 0 && level(j) > E) --j;
  while (level(j + 1) <= E) ++j;
  return j + 1;
}

std::vector<double> free_neumann_spectrum_discrete(std::size_t n, double h) {
  std::vector<double> levels(n);
  for (std::size_t j = 0; j < n; ++j) {
    // 2(1 - cos θ) = 4 sin²(θ/2), without the cancellation at small θ
    const double s = std::sin(0.5 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    levels[j] = 4.0 * s * s / (h * h);
  }
  return levels;
}

void write_csv(const TridiagonalOperator& T, std::ostream& out) {
  out << "i,diag,offdiag\n";
  out.precision(17);
  for (std::size_t i = 0; i < T.n; ++i) {
    out << i << ',' << T.diag[i] << ',' << (i + 1 < T.n ? T.offdiag[i] : 0.0) << '\n';
  }
}

}  // namespace lifshitz
