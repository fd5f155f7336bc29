#include "xscat/multi_energy.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace xscat {

EnergyGrid EnergyGrid::checked(std::vector<double> lambdas) {
  if (lambdas.empty()) throw ValidationError("energy grid must be nonempty");
  for (double l : lambdas)
    if (!(l > 0.0)) throw ValidationError("energies must be strictly positive");
  for (size_t i = 0; i < lambdas.size(); ++i)
    for (size_t j = i + 1; j < lambdas.size(); ++j) {
      double gap = std::abs(lambdas[i] - lambdas[j]) / std::max(lambdas[i], lambdas[j]);
      if (gap <= 1e-9) throw ValidationError("energy grid is singular: duplicate lambda");
    }
  return EnergyGrid{std::move(lambdas)};
}

EnergyGrid EnergyGrid::default_grid(int count) {
  if (count < 1) throw ValidationError("energy count must be positive");
  std::vector<double> l(count);
  for (int i = 0; i < count; ++i) l[i] = 1.0 + 0.5 * i;
  return EnergyGrid{std::move(l)};
}

int energies_required(int l) {
  if (l < 0) throw ValidationError("perturbation order must be nonnegative");
  return l + 1;
}

SeparationResult separate_degrees(const std::vector<std::complex<double>>& values,
                                  const EnergyGrid& grid, int max_degree) {
  if (max_degree < 0) throw ValidationError("max degree must be nonnegative");
  const int m = grid.size();
  const int cols = max_degree + 1;
  if (static_cast<int>(values.size()) != m)
    throw ValidationError("value count must match the energy grid");
  if (m < cols)
    throw UnderdeterminedError("separation needs at least l+1 energies, got " +
                               std::to_string(m) + " for degree " + std::to_string(max_degree));

  Eigen::MatrixXd v(m, cols);
  for (int i = 0; i < m; ++i) {
    double p = 1.0;
    for (int d = 0; d < cols; ++d) {
      v(i, d) = p;
      p *= grid.lambdas[i];
    }
  }

  Eigen::VectorXd re(m), im(m);
  for (int i = 0; i < m; ++i) {
    re(i) = values[i].real();
    im(i) = values[i].imag();
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
  Eigen::VectorXd cre = qr.solve(re);
  Eigen::VectorXd cim = qr.solve(im);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
  const auto& sv = svd.singularValues();

  SeparationResult out;
  out.coefficients.resize(cols);
  for (int d = 0; d < cols; ++d) out.coefficients[d] = {cre(d), cim(d)};
  out.condition_number = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                 : std::numeric_limits<double>::infinity();
  return out;
}

std::vector<SeparationResult> separate_fields(
    const std::vector<std::vector<std::complex<double>>>& values_per_energy,
    const EnergyGrid& grid, int max_degree) {
  if (static_cast<int>(values_per_energy.size()) != grid.size())
    throw ValidationError("per-energy batch count must match the grid");
  const size_t batch = values_per_energy.empty() ? 0 : values_per_energy.front().size();
  for (const auto& row : values_per_energy)
    if (row.size() != batch) throw ValidationError("ragged per-energy batch");
  std::vector<SeparationResult> out;
  out.reserve(batch);
  std::vector<std::complex<double>> column(grid.size());
  for (size_t b = 0; b < batch; ++b) {
    for (int i = 0; i < grid.size(); ++i) column[i] = values_per_energy[i][b];
    out.push_back(separate_degrees(column, grid, max_degree));
  }
  return out;
}

}  // namespace xscat
