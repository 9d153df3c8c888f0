#pragma once

// Eigenvalue counting and extremal eigenvalues of symmetric tridiagonal
// operators by Sturm sequences and bisection.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "lifshitz/discretize.hpp"

namespace lifshitz {

// Number of eigenvalues <= E.
std::size_t count_leq(const TridiagonalOperator& T, double E);

// count_leq for several energies in one sweep over the matrix.
void count_leq(const TridiagonalOperator& T, std::span<const double> energies, std::span<std::size_t> counts);

// Gershgorin enclosure [lo, hi] of the spectrum.
std::pair<double, double> gershgorin_bounds(const TridiagonalOperator& T);

struct BisectionOptions {
  double tol = 0.0;      // <= 0 selects 1e-10 · max(1, ‖T‖)
  int max_iterations = 200;
};

double default_tolerance(const TridiagonalOperator& T);

// E₁ … E_k, each the midpoint of a bracket of width <= tol.
std::vector<double> smallest_eigenvalues(const TridiagonalOperator& T, std::size_t k, BisectionOptions options = {});

inline double ground_state_energy(const TridiagonalOperator& T, BisectionOptions options = {}) {
  return smallest_eigenvalues(T, 1, options).front();
}

inline constexpr std::size_t kDenseOracleMaxSize = 512;

// Full spectrum by implicit-shift QL iteration, ascending; test oracle, n <= 512.
std::vector<double> dense_oracle(const TridiagonalOperator& T);

}  // namespace lifshitz
