#ifndef XSCAT_PIPELINE_HPP
#define XSCAT_PIPELINE_HPP

// Config-driven batch pipeline shared by the C API and the CLI.  Every
// command is a pure function of (config, input files): reruns produce
// byte-identical outputs.

#include <json.hpp>
#include <string>

#include "xscat/reconstruction.hpp"

namespace xscat {

struct RunConfig {
  int n = 3;
  int k = 2;
  int l = 2;
  std::vector<int> r_levels{1, 2, 3};
  int d_max = 3;
  std::uint64_t seed = 42;
  int arc_count = 0;          // 0: three-fold oversampling of the largest block
  int quadrature_order = 128;
  std::vector<double> energies;  // empty: default grid of energy_count values
  int energy_count = 0;          // 0: l + 1
  double noise = 0.0;
  double threshold = 1e-6;    // invert exit gate on relative coefficient error
  double tikhonov = 0.0;
  bool inject_kernel = false;
  double tolerance_scale = 1.0;  // scales every toleranced bound in cmd_check
  int threads = 1;

  struct Expand {
    int n = 4;
    int k = 2;
    int alpha_max = 10;
    int truncation = 8;
    long lambda_num = 1, lambda_den = 1;
    int eigen_j = 1;
    long tau_num = 1, tau_den = 1;
  } expand;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load_file(const std::string& path);
  /// Throws ValidationError on any violated module precondition.
  void validate() const;

  EnergyGrid effective_grid() const;
  int effective_arc_count() const;
};

/// gen: ground-truth tensor JSON (truth.json) and arc sample CSV (arcs.csv).
nlohmann::json cmd_gen(const RunConfig& config, const std::string& out_dir);

/// forward: symbol-data CSV per (level, energy): symbol_r<r>_e<i>.csv, with
/// optional seeded Gaussian noise.
nlohmann::json cmd_forward(const RunConfig& config, const std::string& out_dir);

/// invert: recovery report JSON (report.json).  Throws the mapped error when
/// a level fails (underdetermined / rank-deficient) or the coefficient error
/// exceeds the configured threshold; the report file is written first.
nlohmann::json cmd_invert(const RunConfig& config, const std::string& out_dir);

/// check: runs the module invariant suites at config sizes; report written
/// to check_report.json; throws threshold error if any check fails.
nlohmann::json cmd_check(const RunConfig& config, const std::string& out_dir);

/// expand: boundary-expansion artifacts (c_table.csv, formal_solution.json,
/// residual_orders.csv, eigen_potential.json, eigen_slope.csv).
nlohmann::json cmd_expand(const RunConfig& config, const std::string& out_dir);

}  // namespace xscat

#endif
