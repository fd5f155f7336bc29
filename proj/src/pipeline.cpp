#include "xscat/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <limits>
#include <set>
#include <sstream>

#include "xscat/boundary_expansion.hpp"
#include "xscat/parallel.hpp"
#include "xscat/serialize.hpp"

namespace xscat {

namespace {
constexpr double kPi = std::numbers::pi;
namespace fs = std::filesystem;
}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{
      "n",      "k",        "l",         "r_levels",  "d_max",          "seed",
      "arc_count", "quadrature_order", "energies", "energy_count", "noise",
      "threshold", "tikhonov", "inject_kernel", "tolerance_scale", "threads", "expand"};
  static const std::set<std::string> known_expand{"n",          "k",       "alpha_max",
                                                  "truncation", "lambda_num", "lambda_den",
                                                  "eigen_j",    "tau_num", "tau_den"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ValidationError("unknown config field: " + key);

  RunConfig c;
  c.n = j.value("n", c.n);
  c.k = j.value("k", c.k);
  c.l = j.value("l", c.l);
  if (j.contains("r_levels")) c.r_levels = j.at("r_levels").get<std::vector<int>>();
  c.d_max = j.value("d_max", c.d_max);
  c.seed = j.value("seed", c.seed);
  c.arc_count = j.value("arc_count", c.arc_count);
  c.quadrature_order = j.value("quadrature_order", c.quadrature_order);
  if (j.contains("energies")) c.energies = j.at("energies").get<std::vector<double>>();
  c.energy_count = j.value("energy_count", c.energy_count);
  c.noise = j.value("noise", c.noise);
  c.threshold = j.value("threshold", c.threshold);
  c.tikhonov = j.value("tikhonov", c.tikhonov);
  c.inject_kernel = j.value("inject_kernel", c.inject_kernel);
  c.tolerance_scale = j.value("tolerance_scale", c.tolerance_scale);
  c.threads = j.value("threads", c.threads);
  if (j.contains("expand")) {
    const auto& e = j.at("expand");
    for (const auto& [key, value] : e.items())
      if (!known_expand.count(key)) throw ValidationError("unknown expand field: " + key);
    c.expand.n = e.value("n", c.expand.n);
    c.expand.k = e.value("k", c.expand.k);
    c.expand.alpha_max = e.value("alpha_max", c.expand.alpha_max);
    c.expand.truncation = e.value("truncation", c.expand.truncation);
    c.expand.lambda_num = e.value("lambda_num", c.expand.lambda_num);
    c.expand.lambda_den = e.value("lambda_den", c.expand.lambda_den);
    c.expand.eigen_j = e.value("eigen_j", c.expand.eigen_j);
    c.expand.tau_num = e.value("tau_num", c.expand.tau_num);
    c.expand.tau_den = e.value("tau_den", c.expand.tau_den);
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

void RunConfig::validate() const {
  if (n < 3) throw ValidationError("pipeline needs n >= 3");
  if (k < 1) throw ValidationError("k must be positive");
  if (l < 0 || l > 2 * k - 1) throw ValidationError("l must satisfy 0 <= l <= 2k-1");
  if (d_max < 0) throw ValidationError("d_max must be nonnegative");
  if (r_levels.empty()) throw ValidationError("r_levels must be nonempty");
  std::vector<int> sorted = r_levels;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 1) throw ValidationError("levels must be >= 1");
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("levels must be distinct");
  if (quadrature_order < 2) throw ValidationError("quadrature order too small");
  if (noise < 0.0) throw ValidationError("noise must be nonnegative");
  if (threshold <= 0.0) throw ValidationError("threshold must be positive");
  if (tikhonov < 0.0) throw ValidationError("tikhonov must be nonnegative");
  if (tolerance_scale < 0.0) throw ValidationError("tolerance_scale must be nonnegative");
  if (threads < 1) throw ValidationError("threads must be positive");
  if (energy_count < 0) throw ValidationError("energy_count must be nonnegative");
  if (!energies.empty()) EnergyGrid::checked(energies);
  if (expand.n < 2 || expand.k < 1 || expand.alpha_max < 0 || expand.truncation < 1)
    throw ValidationError("bad expand parameters");
  if (expand.lambda_num == 0 || expand.lambda_den == 0)
    throw ValidationError("expand lambda must be nonzero");
  if (expand.tau_num <= 0 || expand.tau_den <= 0)
    throw ValidationError("expand tau must be positive");
  if (expand.eigen_j < 1) throw ValidationError("expand eigen_j must be >= 1");
}

EnergyGrid RunConfig::effective_grid() const {
  if (!energies.empty()) return EnergyGrid::checked(energies);
  int count = energy_count > 0 ? energy_count : energies_required(l);
  return EnergyGrid::default_grid(count);
}

int RunConfig::effective_arc_count() const {
  if (arc_count > 0) return arc_count;
  int mx = 1;
  for (int r : r_levels)
    for (int d = 0; d <= l; ++d)
      mx = std::max(mx, static_cast<int>(admissible_basis(n, d, d_max, r).size()) +
                            (inject_kernel && d >= 1 ? 1 : 0));
  return 3 * mx;
}

namespace {

std::string symbol_file_name(int r, int energy_index) {
  return "symbol_r" + std::to_string(r) + "_e" + std::to_string(energy_index) + ".csv";
}

}  // namespace

nlohmann::json cmd_gen(const RunConfig& config, const std::string& out_dir) {
  auto truth = synthesize(config.seed, config.n, config.k, config.l, config.r_levels,
                          config.d_max);
  auto arcs = sample_arcs(config.effective_arc_count(), config.n, config.seed);
  write_file((fs::path(out_dir) / "truth.json").string(), truth_to_json(truth).dump(2) + "\n");
  write_file((fs::path(out_dir) / "arcs.csv").string(), arcs_to_csv(arcs));
  nlohmann::json report;
  report["command"] = "gen";
  report["arc_count"] = static_cast<int>(arcs.size());
  report["levels"] = config.r_levels;
  report["files"] = {"truth.json", "arcs.csv"};
  return report;
}

nlohmann::json cmd_forward(const RunConfig& config, const std::string& out_dir) {
  fs::path dir(out_dir);
  auto truth = truth_from_json(nlohmann::json::parse(read_file((dir / "truth.json").string())));
  auto arcs = arcs_from_csv(read_file((dir / "arcs.csv").string()));
  auto grid = config.effective_grid();
  auto rule = QuadratureRule::gauss_legendre(config.quadrature_order);
  auto data = forward_data(truth, arcs, grid, rule, config.threads);

  if (config.noise > 0.0) {
    for (size_t li = 0; li < data.values.size(); ++li)
      for (size_t ei = 0; ei < data.values[li].size(); ++ei) {
        SplitMix64 rng(derive_seed(config.seed ^ 0xA05Eull,
                                   (static_cast<std::uint64_t>(li) << 32) | ei));
        for (auto& v : data.values[li][ei])
          v += config.noise * std::complex<double>{rng.normal(), rng.normal()};
      }
  }

  nlohmann::json files = nlohmann::json::array();
  for (size_t li = 0; li < data.levels.size(); ++li)
    for (int ei = 0; ei < grid.size(); ++ei) {
      std::string name = symbol_file_name(data.levels[li], ei);
      write_file((dir / name).string(),
                 symbol_rows_to_csv(arcs, grid.lambdas[ei], data.levels[li],
                                    data.values[li][ei]));
      files.push_back(name);
    }
  nlohmann::json report;
  report["command"] = "forward";
  report["rows"] = static_cast<int>(arcs.size()) * grid.size() *
                   static_cast<int>(data.levels.size());
  report["files"] = std::move(files);
  return report;
}

namespace {

struct LoadedData {
  SymbolDataSet data;
  std::vector<GreatCircleArc> arcs;
};

LoadedData load_symbol_data(const fs::path& dir) {
  LoadedData out;
  out.arcs = arcs_from_csv(read_file((dir / "arcs.csv").string()));

  // Discover symbol files; levels and energies come from their contents.
  std::map<int, std::map<double, std::vector<std::complex<double>>>> by_level;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("symbol_", 0) == 0 && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no symbol data files in " + dir.string());
  for (const auto& f : files) {
    SymbolCsv csv = symbol_rows_from_csv(read_file(f.string()));
    if (csv.values.size() != out.arcs.size())
      throw IoError("symbol file row count does not match arcs: " + f.string());
    by_level[csv.r][csv.lambda] = std::move(csv.values);
  }

  std::vector<double> lambdas;
  for (const auto& [r, per_lambda] : by_level) {
    if (lambdas.empty())
      for (const auto& [lam, vals] : per_lambda) lambdas.push_back(lam);
    else {
      std::vector<double> here;
      for (const auto& [lam, vals] : per_lambda) here.push_back(lam);
      if (here != lambdas) throw IoError("levels disagree on the energy grid");
    }
  }
  out.data.grid = EnergyGrid::checked(lambdas);
  for (auto& [r, per_lambda] : by_level) {
    out.data.levels.push_back(r);
    std::vector<std::vector<std::complex<double>>> per_energy;
    for (auto& [lam, vals] : per_lambda) per_energy.push_back(std::move(vals));
    out.data.values.push_back(std::move(per_energy));
  }
  return out;
}

nlohmann::json degree_report(const DegreeRecovery& deg, const LevelTruth* truth) {
  nlohmann::json dj;
  dj["d"] = deg.degree;
  dj["weight"] = deg.weight;
  dj["residual"] = deg.residual;
  dj["cond"] = deg.condition_number;
  dj["separation_cond"] = deg.separation_condition;
  dj["unconstrained"] = deg.unconstrained;
  if (!deg.singular_values.empty()) {
    dj["min_sv"] = deg.singular_values.back();
    dj["singular_values"] = deg.singular_values;
  }
  if (!deg.unconstrained) {
    nlohmann::json coords = nlohmann::json::array();
    for (auto c : deg.coefficients) coords.push_back(c.real());
    dj["coefficients"] = std::move(coords);
    dj["recovered"] = tensor_to_json(deg.recovered);
  }
  if (truth && !deg.unconstrained) {
    auto it = truth->basis_coords.find(deg.degree);
    if (it != truth->basis_coords.end() && it->second.size() == deg.coefficients.size()) {
      double num = 0.0, den = 0.0;
      for (size_t m = 0; m < it->second.size(); ++m) {
        num += std::norm(deg.coefficients[m] - std::complex<double>{it->second[m], 0.0});
        den += it->second[m] * it->second[m];
      }
      dj["coeff_error"] = std::sqrt(num) / std::max(std::sqrt(den), 1e-30);
    }
  }
  return dj;
}

}  // namespace

nlohmann::json cmd_invert(const RunConfig& config, const std::string& out_dir) {
  fs::path dir(out_dir);
  LoadedData loaded = load_symbol_data(dir);
  auto rule = QuadratureRule::gauss_legendre(config.quadrature_order);

  PerturbationAsymptotics truth;
  bool have_truth = fs::exists(dir / "truth.json");
  if (have_truth)
    truth = truth_from_json(nlohmann::json::parse(read_file((dir / "truth.json").string())));

  RecoveryOptions options;
  options.tikhonov = config.tikhonov;
  options.inject_kernel = config.inject_kernel;
  options.threads = config.threads;

  PipelineShape shape{config.n, config.k, config.l, config.d_max};
  auto report = recover_all(loaded.data, loaded.arcs, shape, rule, options);

  nlohmann::json j;
  j["command"] = "invert";
  j["threshold"] = config.threshold;
  double max_error = 0.0;
  bool have_error = false;
  nlohmann::json levels = nlohmann::json::array();
  nlohmann::json recovered_levels = nlohmann::json::array();
  for (const auto& level : report.levels) {
    nlohmann::json lj;
    lj["r"] = level.r;
    lj["failed"] = level.failed;
    if (level.failed) {
      lj["error"] = level.error;
      lj["error_code"] = static_cast<int>(level.error_code);
    } else {
      const LevelTruth* lt = nullptr;
      if (have_truth) {
        auto it = truth.levels.find(level.r);
        if (it != truth.levels.end()) lt = &it->second;
      }
      nlohmann::json degrees = nlohmann::json::array();
      int rank = 0;
      double min_sv = std::numeric_limits<double>::infinity();
      nlohmann::json rec_degrees = nlohmann::json::array();
      for (const auto& deg : level.degrees) {
        nlohmann::json dj = degree_report(deg, lt);
        if (dj.contains("coeff_error")) {
          max_error = std::max(max_error, dj["coeff_error"].get<double>());
          have_error = true;
        }
        if (!deg.unconstrained) {
          rank += static_cast<int>(deg.coefficients.size());
          if (!deg.singular_values.empty())
            min_sv = std::min(min_sv, deg.singular_values.back());
          nlohmann::json rd;
          rd["d"] = deg.degree;
          rd["tensor"] = dj["recovered"];
          rec_degrees.push_back(std::move(rd));
        }
        degrees.push_back(std::move(dj));
      }
      lj["degrees"] = std::move(degrees);
      lj["rank"] = rank;
      if (std::isfinite(min_sv)) lj["min_sv"] = min_sv;
      lj["unconstrained_parity"] =
          std::string("coefficient degrees with parity of r (mod 2) are unconstrained by "
                      "this weight class");
      nlohmann::json rl;
      rl["r"] = level.r;
      rl["degrees"] = std::move(rec_degrees);
      recovered_levels.push_back(std::move(rl));
    }
    levels.push_back(std::move(lj));
  }
  j["levels"] = std::move(levels);
  if (have_error) j["max_coeff_error"] = max_error;

  bool threshold_ok = !have_error || max_error < config.threshold;
  // residual fallback when no truth is available
  if (!have_truth) {
    for (const auto& level : report.levels)
      if (!level.failed)
        for (const auto& deg : level.degrees)
          if (!deg.unconstrained && deg.residual > config.threshold) threshold_ok = false;
  }
  j["passed"] = threshold_ok && !report.any_failed;

  write_file((dir / "report.json").string(), j.dump(2) + "\n");
  nlohmann::json recovered;
  recovered["levels"] = std::move(recovered_levels);
  write_file((dir / "recovered.json").string(), recovered.dump(2) + "\n");

  for (const auto& level : report.levels)
    if (level.failed) throw Error(level.error_code, level.error);
  if (!threshold_ok)
    throw ThresholdError("coefficient error " + format_double(max_error) +
                         " exceeds threshold " + format_double(config.threshold));
  return j;
}

// ---------------------------------------------------------------------------
// cmd_check: the module invariant suites at configured sizes.

namespace {

struct CheckOutcome {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  bool exact = false;
};

std::complex<double> rk4_step_all(const std::function<std::complex<double>(
                                      double, std::complex<double>)>& f,
                                  double s0, std::complex<double> b0, double s1, int steps) {
  const double h = (s1 - s0) / steps;
  std::complex<double> b = b0;
  double s = s0;
  for (int i = 0; i < steps; ++i) {
    auto k1 = f(s, b);
    auto k2 = f(s + h / 2, b + 0.5 * h * k1);
    auto k3 = f(s + h / 2, b + 0.5 * h * k2);
    auto k4 = f(s + h, b + h * k3);
    b += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s += h;
  }
  return b;
}

Polynomial random_check_poly(int n, int deg, SplitMix64& rng, bool homogeneous) {
  Polynomial p(n);
  int lo = homogeneous ? deg : 0;
  for (int d = lo; d <= deg; ++d)
    for (const auto& e : enumerate_multiindices(n, d)) {
      long c = static_cast<long>(rng.next() % 7) - 3;
      if (c != 0) p.add_term(e, CRat(c));
    }
  return p;
}

}  // namespace

nlohmann::json cmd_check(const RunConfig& config, const std::string& out_dir) {
  const double scale = config.tolerance_scale;
  auto rule = QuadratureRule::gauss_legendre(config.quadrature_order);
  std::vector<CheckOutcome> outcomes;
  auto toleranced = [&](const std::string& name, double measured, double bound) {
    outcomes.push_back({name, measured <= bound * scale, measured, bound * scale, false});
  };
  auto exact = [&](const std::string& name, bool pass) {
    outcomes.push_back({name, pass, pass ? 0.0 : 1.0, 0.0, true});
  };

  // sphere geometry
  toleranced("quadrature_constant_pi",
             std::abs(weighted_quadrature([](double) { return std::complex<double>{1.0, 0.0}; },
                                          0, rule)
                          .real() -
                      kPi),
             1e-12);
  toleranced("quadrature_sin_weight",
             std::abs(weighted_quadrature([](double) { return std::complex<double>{1.0, 0.0}; },
                                          1, rule)
                          .real() -
                      2.0),
             1e-12);
  {
    auto f = [](double s) {
      double sn = std::sin(s), cs = std::cos(s);
      return std::complex<double>{sn * sn * sn * sn * sn * cs * cs, 0.0};
    };
    auto doubled = QuadratureRule::gauss_legendre(2 * config.quadrature_order);
    toleranced("quadrature_convergence",
               std::abs(weighted_quadrature(f, 0, rule).real() -
                        weighted_quadrature(f, 0, doubled).real()),
               1e-10);
  }
  {
    SplitMix64 rng(1);
    double worst = 0.0;
    for (const auto& arc : sample_arcs(5, config.n, config.seed)) {
      for (int rep = 0; rep < 100; ++rep) {
        double s = 8.0 * rng.uniform_sym();
        auto g = gamma(arc, s);
        worst = std::max(worst, std::abs(norm(g) - 1.0));
        worst = std::max(worst, std::abs(dot(g, gamma_dot(arc, s))));
        auto gp = gamma(arc, s + 2 * kPi);
        for (int i = 0; i < config.n; ++i) worst = std::max(worst, std::abs(g[i] - gp[i]));
      }
    }
    toleranced("arc_frame_and_periodicity", worst, 1e-10);
  }
  {
    auto arcs = sample_arcs(10000, config.n, config.seed + 1);
    std::vector<double> mean(config.n, 0.0);
    for (const auto& arc : arcs)
      for (int i = 0; i < config.n; ++i) mean[i] += arc.omega[i] / arcs.size();
    toleranced("arc_sampling_mean", norm(mean), 0.05);
  }

  // tensor fields
  {
    SplitMix64 rng(2);
    bool ok = true;
    for (int l = 1; l <= 2 && ok; ++l) {
      SymTensorField eta(config.n, l - 1);
      for (const auto& alpha : enumerate_multiindices(config.n, l - 1))
        eta.set_coefficient(alpha, random_check_poly(config.n, 3, rng, false));
      SymTensorField mu = sym_derivative(eta);
      std::vector<int> a(l), b(l);
      for (int rep = 0; rep < 20; ++rep) {
        for (int i = 0; i < l; ++i) {
          a[i] = static_cast<int>(rng.next() % config.n);
          b[i] = static_cast<int>(rng.next() % config.n);
        }
        if (!exchange_residual(mu, a, b).is_zero()) ok = false;
      }
    }
    exact("exchange_sum_annihilates_potentials", ok);
  }
  {
    SplitMix64 rng(3);
    bool ok = true;
    for (int l = 1; l <= 2; ++l) {
      SymTensorField mu(config.n, l);
      for (const auto& alpha : enumerate_multiindices(config.n, l))
        mu.set_coefficient(alpha, random_check_poly(config.n, 2, rng, false));
      std::map<MultiIndex, Polynomial> tuple_comps;
      for (const auto& alpha : enumerate_multiindices(config.n, l)) {
        std::vector<int> tuple;
        for (int i = 0; i < config.n; ++i)
          for (int q = 0; q < alpha[i]; ++q) tuple.push_back(i);
        tuple_comps[alpha] = mu.tuple_component(tuple);
      }
      if (!(SymTensorField::from_tuple_components(config.n, l, tuple_comps) == mu)) ok = false;
    }
    exact("multiindex_tuple_roundtrip", ok);
  }
  {
    bool ok = true;
    for (int d = 0; d <= std::min(config.l, 2); ++d)
      for (const auto& f : aradial_basis(config.n, d, std::min(config.d_max, 2))) {
        if (!is_aradial(f, 1e-10)) ok = false;
        if (d >= 1 && !radial_contraction(f).is_zero()) ok = false;
      }
    exact("aradial_basis_contraction_vanishes", ok);
  }

  // xray transform
  {
    SplitMix64 rng(4);
    double worst = 0.0;
    auto arcs = sample_arcs(5, config.n, config.seed + 2);
    for (int l = 1; l <= 2; ++l) {
      auto basis = aradial_basis(config.n, l, 2);
      SymTensorField mu(config.n, l);
      for (const auto& b : basis) {
        long c = static_cast<long>(rng.next() % 9) - 4;
        if (c != 0) mu += b.scaled(CRat(Rational(c, 4)));
      }
      double sgn = (l % 2 == 0) ? 1.0 : -1.0;
      for (const auto& arc : arcs)
        for (int r : {1, 2}) {
          auto comp = component_form_value(mu, arc, r, rule);
          auto wx = weighted_xray(mu, arc, l + r - 1, rule);
          worst = std::max(worst, std::abs(comp - sgn * wx));
        }
    }
    toleranced("reexpression_identity", worst, 1e-8);
  }
  {
    SplitMix64 rng(5);
    double worst = 0.0;
    auto arcs = sample_arcs(3, config.n, config.seed + 3);
    for (const auto& arc : arcs) {
      SymTensorField mu = SymTensorField::scalar(random_check_poly(config.n, 3, rng, false));
      for (int jw : {2, 3}) {
        auto chk = shift_ode_check(mu, arc, jw, 0.4, rule);
        worst = std::max(worst, chk.defect / (1.0 + std::abs(chk.rhs)));
      }
    }
    toleranced("shift_ode_identity", worst, 1e-6);
  }
  {
    SplitMix64 rng(6);
    auto arcs = sample_arcs(3, config.n, config.seed + 4);
    double worst = 0.0;
    for (const auto& arc : arcs) {
      SymTensorField m1(config.n, 1), m2(config.n, 1);
      for (const auto& alpha : enumerate_multiindices(config.n, 1)) {
        m1.set_coefficient(alpha, random_check_poly(config.n, 2, rng, false));
        m2.set_coefficient(alpha, random_check_poly(config.n, 2, rng, false));
      }
      auto lhs = weighted_xray(m1.scaled(CRat(3, 4)) + m2.scaled(CRat(-5, 8)), arc, 1, rule);
      auto rhs = 0.75 * weighted_xray(m1, arc, 1, rule) - 0.625 * weighted_xray(m2, arc, 1, rule);
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
    toleranced("xray_linearity", worst, 1e-12);
  }
  {
    SplitMix64 rng(7);
    auto arcs = sample_arcs(3, config.n, config.seed + 5);
    double worst = 0.0;
    for (int l = 0; l <= 2; ++l) {
      SymTensorField mu(config.n, l);
      for (const auto& alpha : enumerate_multiindices(config.n, l))
        mu.set_coefficient(alpha, random_check_poly(config.n, 2, rng, false));
      for (const auto& arc : arcs) {
        std::vector<double> neg = arc.omega.coords;
        for (double& x : neg) x = -x;
        GreatCircleArc rev{SpherePoint{neg}, arc.v};
        auto a = weighted_xray(mu, rev, 2, rule);
        auto b = weighted_xray(mu, arc, 2, rule);
        if (l % 2) b = -b;
        worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(b)));
      }
    }
    toleranced("antipodal_reversal", worst, 1e-10);
  }

  // transport symbols
  {
    SplitMix64 rng(8);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      int n = 3 + static_cast<int>(rng.next() % 4);
      double d0 = rng.uniform_sym(), d1 = rng.uniform_sym();
      auto dfun = [=](double s) { return d0 + d1 * std::cos(s); };
      CurvedODE ode{n, dfun, nullptr, 1, 1.0};
      auto closed = solve_curved_transport(ode, 0, {1.0, 0.0});
      auto rhs = [&](double s, std::complex<double> b) {
        return -(((1.0 - n) / 2.0) * std::cos(s) +
                 std::complex<double>{0.0, 1.0} * std::sin(s) * dfun(s)) *
               b / std::sin(s);
      };
      std::complex<double> b0 = closed(kPi / 2);
      for (double target : {0.1, kPi - 0.1}) {
        auto num = rk4_step_all(rhs, kPi / 2, b0, target, 4000);
        worst = std::max(worst, std::abs(num - closed(target)));
      }
    }
    toleranced("curved_transport_closed_form", worst, 1e-8);
  }
  {
    // blow-up exponents for r = 1, 2, 3
    SplitMix64 rng(9);
    auto arc = sample_arcs(1, config.n, config.seed + 6)[0];
    double worst = 0.0;
    for (int r : {1, 2, 3}) {
      std::map<MultiIndex, Polynomial> coeffs;
      coeffs[MultiIndex(config.n, 0)] =
          random_check_poly(config.n, (r - 1) % 2, rng, true);
      if (coeffs[MultiIndex(config.n, 0)].is_zero())
        coeffs[MultiIndex(config.n, 0)] = (r % 2 == 1)
                                              ? Polynomial(config.n, CRat(1))
                                              : Polynomial::variable(config.n, 0);
      Forcing f(config.n, 2, r, coeffs);
      auto b = solve_flat_transport(f, arc, 1.25, rule);
      if (std::abs(b(kPi - 1e-3)) < 1e-9) continue;
      std::vector<double> xs, ys;
      for (int i = 0; i < 20; ++i) {
        double eps = 1e-3 * std::pow(300.0, i / 19.0);
        xs.push_back(std::log(eps));
        ys.push_back(std::log(std::abs(b(kPi - eps))));
      }
      double mx = 0, my = 0;
      for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / xs.size();
        my += ys[i] / ys.size();
      }
      double num = 0, den = 0;
      for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
      }
      worst = std::max(worst, std::abs(num / den + r));
    }
    toleranced("transport_blowup_exponent", worst, 0.05);
  }
  {
    // scaling law in k
    SplitMix64 rng(10);
    auto arc = sample_arcs(1, config.n, config.seed + 7)[0];
    std::map<MultiIndex, Polynomial> coeffs;
    for (const auto& alpha : enumerate_multiindices(config.n, 1))
      coeffs[alpha] = random_check_poly(config.n, 1, rng, true);
    Forcing f2(config.n, 2, 2, coeffs);
    Forcing f3(config.n, 3, 2, coeffs);
    double lambda = 1.75;
    auto a = symbol_transform(f2, arc, lambda, rule) * std::pow(lambda, 3);
    auto b = symbol_transform(f3, arc, lambda, rule) * std::pow(lambda, 5);
    toleranced("symbol_scaling_k_invariance", std::abs(a - b) / (1.0 + std::abs(a)), 1e-13);
  }

  // multi-energy
  {
    SplitMix64 rng(11);
    auto grid = EnergyGrid::default_grid(4);
    std::vector<std::complex<double>> c(4);
    for (auto& x : c) x = {rng.uniform_sym(), rng.uniform_sym()};
    std::vector<std::complex<double>> vals;
    for (double lam : grid.lambdas) {
      std::complex<double> p{0.0, 0.0};
      double lp = 1.0;
      for (int d = 0; d <= 3; ++d) {
        p += c[d] * lp;
        lp *= lam;
      }
      vals.push_back(p);
    }
    auto res = separate_degrees(vals, grid, 3);
    double worst = 0.0;
    for (int d = 0; d <= 3; ++d)
      worst = std::max(worst, std::abs(res.coefficients[d] - c[d]) / (1.0 + std::abs(c[d])));
    toleranced("vandermonde_roundtrip", worst, 1e-10);

    auto perm = EnergyGrid::checked({2.5, 1.0, 2.0, 1.5});
    std::vector<std::complex<double>> ones(4, {1.0, 0.0});
    auto ra = separate_degrees(ones, grid, 3);
    auto rb = separate_degrees(ones, perm, 3);
    toleranced("separation_condition_reorder_invariance",
               std::abs(ra.condition_number - rb.condition_number) / ra.condition_number,
               1e-12);
    bool raised = false;
    try {
      separate_degrees({{1.0, 0.0}, {2.0, 0.0}}, EnergyGrid::checked({1.0, 2.0}), 2);
    } catch (const UnderdeterminedError&) {
      raised = true;
    }
    exact("energy_count_sharpness", raised);
  }

  // boundary expansion (exact checks)
  {
    bool c0_ok = true, ca_ok = true;
    for (int n = 3; n <= 6; ++n)
      for (int kk = 1; kk <= 3; ++kk) {
        if (!c_alpha(n, kk, Rational(3, 2), 0).is_zero()) c0_ok = false;
        for (int alpha = 1; alpha <= 10; ++alpha)
          if (c_alpha(n, kk, Rational(3, 2), alpha) !=
              CRat(Rational(0), Rational(-2 * alpha)))
            ca_ok = false;
      }
    exact("boundary_c0_zero", c0_ok);
    exact("boundary_c_alpha_nonzero", ca_ok);
  }
  {
    SplitMix64 rng(12);
    bool ok = true;
    for (int kk = 1; kk <= 3; ++kk) {
      RadialSeries s = RadialSeries::phased(RadialPhase::oscillatory_minus, 5, 10);
      for (int beta = 0; beta <= 10; ++beta)
        s.add_term(beta, CRat(Rational(static_cast<long>(rng.next() % 9) - 4, 3)));
      if (!q_factorization_check(5, kk, Rational(4, 3), s).is_zero()) ok = false;
    }
    exact("q_factorization_defect_zero", ok);
  }
  {
    bool ok = true;
    for (int N = 1; N <= 5; ++N) {
      RadialSeries u = formal_solution(4, 2, Rational(3, 2), CRat(1), N);
      RadialSeries res = apply_operator(RadialOperator{4, 2, Rational(3, 2)}, u);
      if (res.lowest_offset() != N + 2) ok = false;
    }
    exact("formal_solution_residual_order", ok);
  }

  // assemble report
  nlohmann::json checks = nlohmann::json::array();
  int failed = 0;
  for (const auto& o : outcomes) {
    nlohmann::json cj;
    cj["name"] = o.name;
    cj["pass"] = o.pass;
    cj["exact"] = o.exact;
    if (!o.exact) {
      cj["measured"] = o.measured;
      cj["bound"] = o.bound;
    }
    if (!o.pass) ++failed;
    checks.push_back(std::move(cj));
  }
  nlohmann::json j;
  j["command"] = "check";
  j["tolerance_scale"] = scale;
  j["checks"] = std::move(checks);
  j["total"] = static_cast<int>(outcomes.size());
  j["failed"] = failed;
  j["passed"] = failed == 0;
  write_file((fs::path(out_dir) / "check_report.json").string(), j.dump(2) + "\n");
  if (failed > 0)
    throw ThresholdError(std::to_string(failed) + " of " + std::to_string(outcomes.size()) +
                         " checks failed");
  return j;
}

nlohmann::json cmd_expand(const RunConfig& config, const std::string& out_dir) {
  fs::path dir(out_dir);
  const auto& e = config.expand;
  Rational lambda = make_rational(e.lambda_num, e.lambda_den);
  Rational tau = make_rational(e.tau_num, e.tau_den);

  // extraction-constant table
  {
    std::ostringstream csv;
    csv << "alpha,re_num,re_den,im_num,im_den\n";
    for (int alpha = 0; alpha <= e.alpha_max; ++alpha) {
      CRat c = c_alpha(e.n, e.k, lambda, alpha);
      csv << alpha << "," << BigInt(numerator(c.re)).str() << ","
          << BigInt(denominator(c.re)).str() << "," << BigInt(numerator(c.im)).str() << ","
          << BigInt(denominator(c.im)).str() << "\n";
    }
    write_file((dir / "c_table.csv").string(), csv.str());
  }

  // formal solution and its residual-order ladder
  RadialSeries u = formal_solution(e.n, e.k, lambda, CRat(1), e.truncation);
  write_file((dir / "formal_solution.json").string(), series_to_json(u).dump(2) + "\n");
  {
    std::ostringstream csv;
    csv << "N,residual_offset,expected_offset\n";
    for (int N = 1; N <= e.truncation; ++N) {
      RadialSeries uN = formal_solution(e.n, e.k, lambda, CRat(1), N);
      RadialSeries res = apply_operator(RadialOperator{e.n, e.k, lambda}, uN);
      csv << N << "," << res.lowest_offset() << "," << N + 2 << "\n";
    }
    write_file((dir / "residual_orders.csv").string(), csv.str());
  }

  // embedded-eigenvalue construction
  auto eigen = eigen_potential(e.n, e.eigen_j, tau, e.truncation);
  {
    nlohmann::json j;
    j["u"] = series_to_json(eigen.u);
    j["potential"] = series_to_json(eigen.potential);
    j["residual"] = series_to_json(eigen.residual);
    j["residual_order_num"] = BigInt(numerator(eigen.residual_order)).str();
    j["residual_order_den"] = BigInt(denominator(eigen.residual_order)).str();
    write_file((dir / "eigen_potential.json").string(), j.dump(2) + "\n");
  }
  {
    std::ostringstream csv;
    csv << "N,rel_residual_at_x_0.1\n";
    for (int N = 0; N <= e.truncation; ++N) {
      auto r = eigen_potential(e.n, e.eigen_j, tau, N);
      double rel =
          std::abs(r.residual.bracket_eval(0.1)) / std::abs(r.u.bracket_eval(0.1));
      csv << N << "," << format_double(rel) << "\n";
    }
    write_file((dir / "eigen_slope.csv").string(), csv.str());
  }

  nlohmann::json report;
  report["command"] = "expand";
  report["files"] = {"c_table.csv", "formal_solution.json", "residual_orders.csv",
                     "eigen_potential.json", "eigen_slope.csv"};
  return report;
}

}  // namespace xscat
