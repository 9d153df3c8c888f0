#pragma once

// Cell-centered finite differences for H = -d²/dx² + V on Λ_L = [-L/2, L/2]
// with Neumann boundary conditions, and the closed-form free spectra.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lifshitz/potentials.hpp"

namespace lifshitz {

inline constexpr int kDefaultPointsPerCell = 32;

struct TridiagonalOperator {
  std::size_t n = 0;
  double h = 0.0;
  double L = 0.0;
  std::vector<double> diag;
  std::vector<double> offdiag;  // n - 1 entries, symmetric
  std::string meta;

  // max_i Σ_j |T_ij|
  double norm() const;
};

// Stencil 2/h² inside, 1/h² on the two boundary rows, -1/h² off the diagonal,
// plus the potential values (one per grid cell) and a constant shift.
TridiagonalOperator assemble_from_cell_values(double L, std::span<const double> potential, double shift = 0.0,
                                              std::string meta = {});

// n = L·m grid cells of width h = 1/m, potential entering through exact cell averages.
TridiagonalOperator assemble(const RandomPotential& W, int m = kDefaultPointsPerCell, double shift = 0.0);

// (πj/L)² for j = 0 … j_max.
std::vector<double> free_neumann_spectrum_continuum(double L, int j_max);
// All continuum free levels (πj/L)² <= E.
std::vector<double> free_neumann_levels_up_to(double L, double E);
// #{j >= 0 : (πj/L)² <= E}
long free_neumann_count(double L, double E);

// 2(1 - cos(πj/n))/h², j = 0 … n-1: spectrum of the free stencil.
std::vector<double> free_neumann_spectrum_discrete(std::size_t n, double h);

// Debug export: columns i, diag_i, offdiag_i (offdiag of the last row is 0).
void write_csv(const TridiagonalOperator& T, std::ostream& out);

}  // namespace lifshitz
