#ifndef XSCAT_SERIALIZE_HPP
#define XSCAT_SERIALIZE_HPP

// File formats: tensor fields and radial series as JSON, arcs and transform
// samples as CSV.  Floating-point output uses shortest round-trip formatting
// so that reruns produce byte-identical files.

#include <json.hpp>
#include <string>
#include <vector>

#include "xscat/boundary_expansion.hpp"
#include "xscat/reconstruction.hpp"
#include "xscat/tensor_fields.hpp"
#include "xscat/xray_transform.hpp"

namespace xscat {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

nlohmann::json tensor_to_json(const SymTensorField& mu);
SymTensorField tensor_from_json(const nlohmann::json& j);

nlohmann::json truth_to_json(const PerturbationAsymptotics& truth);
PerturbationAsymptotics truth_from_json(const nlohmann::json& j);

nlohmann::json series_to_json(const RadialSeries& s);
RadialSeries series_from_json(const nlohmann::json& j);

std::string arcs_to_csv(const std::vector<GreatCircleArc>& arcs);
std::vector<GreatCircleArc> arcs_from_csv(const std::string& text);

/// Columns omega_1..omega_n, v_1..v_n, j, alpha, re, im.
std::string samples_to_csv(const std::vector<TransformSample>& samples);

/// Symbol data rows: omega_*, v_*, lambda, r, re, im (one file per
/// (level, energy) in the pipeline).
std::string symbol_rows_to_csv(const std::vector<GreatCircleArc>& arcs, double lambda, int r,
                               const std::vector<std::complex<double>>& values);
struct SymbolCsv {
  double lambda = 0.0;
  int r = 0;
  std::vector<std::complex<double>> values;  // one per row, arc order
};
SymbolCsv symbol_rows_from_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace xscat

#endif
