#ifndef XSCAT_RECONSTRUCTION_HPP
#define XSCAT_RECONSTRUCTION_HPP

// End-to-end inverse pipeline: synthesize an aradial perturbation, generate
// per-level symbol data across energies, separate the lambda-polynomial
// structure, invert the weighted transforms degree by degree, and report
// injectivity diagnostics.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xscat/multi_energy.hpp"
#include "xscat/transport_symbols.hpp"
#include "xscat/xray_transform.hpp"

namespace xscat {

/// Ground truth for one homogeneity level: basis coordinates per degree in
/// the admissible aradial basis, plus the assembled coefficient map.
struct LevelTruth {
  std::map<MultiIndex, Polynomial> coeffs;            // |alpha| <= l
  std::map<int, std::vector<double>> basis_coords;    // degree -> coordinates
  bool aradial = true;
};

struct PerturbationAsymptotics {
  int n = 3;
  int k = 1;
  int l = 0;
  int d_max = 0;
  std::map<int, LevelTruth> levels;  // r -> truth
};

/// Aradial basis of order d, coefficient degrees <= d_max, restricted to the
/// degree parity matching level r (the parity class the weight
/// j = d + r - 1 constrains; a polynomial standing in for a homogeneous
/// function of degree -r-1 on the sphere must carry this parity).
std::vector<SymTensorField> admissible_basis(int n, int d, int d_max, int r);

/// Deterministic random truth: dyadic coordinates on the admissible basis of
/// every (level, degree) block.  Draws depend on (seed, r, d) only, so the
/// same seed and order produce identical truths for every operator power k.
PerturbationAsymptotics synthesize(std::uint64_t seed, int n, int k, int l,
                                   const std::vector<int>& r_levels, int d_max);

struct SymbolDataSet {
  std::vector<int> levels;
  EnergyGrid grid{};
  // values[level_index][energy_index][arc_index]
  std::vector<std::vector<std::vector<std::complex<double>>>> values;
};

/// Per-level symbol data: value(r, lambda, arc) = symbol_transform of the
/// level-r forcing.  Parallel over (level, energy, arc) with deterministic
/// output for any thread count.
SymbolDataSet forward_data(const PerturbationAsymptotics& truth,
                           const std::vector<GreatCircleArc>& arcs, const EnergyGrid& grid,
                           const QuadratureRule& rule, int threads = 1);

struct DegreeRecovery {
  int degree = 0;
  int weight = 0;  // j = degree + r - 1
  std::vector<std::complex<double>> coefficients;  // admissible-basis coords
  SymTensorField recovered;
  double residual = 0.0;            // relative data misfit
  double condition_number = 0.0;    // forward matrix
  double separation_condition = 0.0;
  std::vector<double> singular_values;
  bool unconstrained = false;       // admissible block empty at this weight
};

struct LevelRecovery {
  int r = 0;
  std::vector<DegreeRecovery> degrees;
  bool failed = false;
  Status error_code = Status::ok;
  std::string error;
};

struct RecoveryOptions {
  double tikhonov = 0.0;     // optional regularization for noisy data
  double rank_tol = 1e-10;   // relative singular-value threshold
  bool inject_kernel = false;  // append an invisible potential direction (diagnostic hook)
  int threads = 1;
};

struct PipelineShape {
  int n = 3;
  int k = 1;
  int l = 0;
  int d_max = 0;
};

/// Inversion of one level: separate degrees across energies on the
/// lambda^{2k-1}-scaled values, then per degree d solve the least-squares
/// system of the forward matrix at weight j = d + r - 1 over the admissible
/// aradial basis.  Rank deficiency raises RankDeficientError carrying the
/// singular-value profile.
LevelRecovery recover_level(const SymbolDataSet& data, int level_index,
                            const std::vector<GreatCircleArc>& arcs, const PipelineShape& shape,
                            const QuadratureRule& rule, const RecoveryOptions& options = {});

struct RecoveryReport {
  std::vector<LevelRecovery> levels;
  bool any_failed = false;
};

/// Loops recover_level over levels in increasing r; failed levels are marked
/// and the pipeline continues.
RecoveryReport recover_all(const SymbolDataSet& data, const std::vector<GreatCircleArc>& arcs,
                           const PipelineShape& shape, const QuadratureRule& rule,
                           const RecoveryOptions& options = {});

struct InjectivityReport {
  int rank = 0;
  double min_singular_value = 0.0;
  double condition_number = 0.0;
  std::vector<double> singular_values;
};

/// SVD diagnostics of the forward matrix.
InjectivityReport injectivity_report(const std::vector<SymTensorField>& basis,
                                     const std::vector<GreatCircleArc>& arcs, int j,
                                     const QuadratureRule& rule, double rank_tol = 1e-10);

/// (z . dz)^{sym d}: the radial direction whose pairing with every great
/// circle vanishes pointwise.  For d = 1 it is the symmetrized derivative of
/// |z|^2 / 2, the potential-tensor column used by the rank-deficiency hook.
SymTensorField radial_potential_direction(int n, int d);

/// Symmetrized-derivative direction with parity-canceling boundary terms:
/// in the kernel of the weight-0 transform.  Supported for l in {1, 2}.
SymTensorField potential_kernel_direction(int n, int l);

}  // namespace xscat

#endif
