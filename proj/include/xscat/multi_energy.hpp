#ifndef XSCAT_MULTI_ENERGY_HPP
#define XSCAT_MULTI_ENERGY_HPP

// Separation of the lambda-polynomial structure of symbol data across
// energies: values of p(lambda) = sum_d c_d lambda^d at l+1 (or more)
// distinct positive energies determine the per-degree coefficients.

#include <complex>
#include <vector>

#include "xscat/errors.hpp"

namespace xscat {

struct EnergyGrid {
  std::vector<double> lambdas;

  /// Validates positivity and pairwise distinctness (relative gap > 1e-9).
  static EnergyGrid checked(std::vector<double> lambdas);
  /// Default grid lambda_i = 1 + i/2.
  static EnergyGrid default_grid(int count);

  int size() const { return static_cast<int>(lambdas.size()); }
};

/// Number of energies needed for an order-l perturbation: l + 1.
int energies_required(int l);

struct SeparationResult {
  std::vector<std::complex<double>> coefficients;  // degrees 0..max_degree
  double condition_number = 0.0;                   // of the Vandermonde matrix
};

/// Fit p(lambda_i) = sum_{d=0}^{max_degree} c_d lambda_i^d.  Square systems
/// solve exactly; overdetermined ones by QR least squares.
SeparationResult separate_degrees(const std::vector<std::complex<double>>& values,
                                  const EnergyGrid& grid, int max_degree);

/// Pointwise application over a batch (for example one entry per arc):
/// values_per_energy[i][b] is p(lambda_i) for batch member b.
std::vector<SeparationResult> separate_fields(
    const std::vector<std::vector<std::complex<double>>>& values_per_energy,
    const EnergyGrid& grid, int max_degree);

}  // namespace xscat

#endif
