#include "xscat/serialize.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace xscat {

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw IoError("bad numeric field: " + s);
  return v;
}

nlohmann::json poly_to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) {
    nlohmann::json t;
    t["exp"] = e;
    t["re"] = to_double(c.re);
    t["im"] = to_double(c.im);
    terms.push_back(std::move(t));
  }
  return terms;
}

Polynomial poly_from_json(int n, const nlohmann::json& terms) {
  Polynomial p(n);
  for (const auto& t : terms) {
    MultiIndex e = t.at("exp").get<MultiIndex>();
    double re = t.at("re").get<double>();
    double im = t.value("im", 0.0);
    p.add_term(e, CRat(rational_from_double(re), rational_from_double(im)));
  }
  return p;
}

std::string rational_string(const Rational& r, bool num) {
  return num ? BigInt(numerator(r)).str() : BigInt(denominator(r)).str();
}

Rational rational_from_strings(const std::string& num, const std::string& den) {
  return Rational(BigInt(num), BigInt(den));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

nlohmann::json tensor_to_json(const SymTensorField& mu) {
  nlohmann::json j;
  j["n"] = mu.dim();
  j["l"] = mu.order();
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [alpha, p] : mu.coefficients()) {
    nlohmann::json c;
    c["alpha"] = alpha;
    c["poly"] = poly_to_json(p);
    coeffs.push_back(std::move(c));
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

SymTensorField tensor_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int l = j.at("l").get<int>();
  SymTensorField mu(n, l);
  for (const auto& c : j.at("coeffs"))
    mu.set_coefficient(c.at("alpha").get<MultiIndex>(), poly_from_json(n, c.at("poly")));
  return mu;
}

nlohmann::json truth_to_json(const PerturbationAsymptotics& truth) {
  nlohmann::json j;
  j["n"] = truth.n;
  j["k"] = truth.k;
  j["l"] = truth.l;
  j["d_max"] = truth.d_max;
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& [r, level] : truth.levels) {
    nlohmann::json lj;
    lj["r"] = r;
    lj["aradial"] = level.aradial;
    nlohmann::json degrees = nlohmann::json::array();
    for (int d = 0; d <= truth.l; ++d) {
      SymTensorField field(truth.n, d);
      for (const auto& [alpha, p] : level.coeffs)
        if (mi_order(alpha) == d) field.set_coefficient(alpha, p);
      nlohmann::json dj;
      dj["d"] = d;
      dj["tensor"] = tensor_to_json(field);
      if (auto it = level.basis_coords.find(d); it != level.basis_coords.end())
        dj["basis_coords"] = it->second;
      degrees.push_back(std::move(dj));
    }
    lj["degrees"] = std::move(degrees);
    levels.push_back(std::move(lj));
  }
  j["levels"] = std::move(levels);
  return j;
}

PerturbationAsymptotics truth_from_json(const nlohmann::json& j) {
  PerturbationAsymptotics truth;
  truth.n = j.at("n").get<int>();
  truth.k = j.at("k").get<int>();
  truth.l = j.at("l").get<int>();
  truth.d_max = j.at("d_max").get<int>();
  for (const auto& lj : j.at("levels")) {
    LevelTruth level;
    for (const auto& dj : lj.at("degrees")) {
      SymTensorField field = tensor_from_json(dj.at("tensor"));
      for (const auto& [alpha, p] : field.coefficients()) level.coeffs[alpha] = p;
      if (dj.contains("basis_coords"))
        level.basis_coords[dj.at("d").get<int>()] = dj.at("basis_coords").get<std::vector<double>>();
    }
    level.aradial = lj.value("aradial", true);
    truth.levels[lj.at("r").get<int>()] = std::move(level);
  }
  return truth;
}

nlohmann::json series_to_json(const RadialSeries& s) {
  nlohmann::json j;
  switch (s.phase) {
    case RadialPhase::oscillatory_minus: j["phase"] = "oscillatory_minus"; break;
    case RadialPhase::oscillatory_plus: j["phase"] = "oscillatory_plus"; break;
    case RadialPhase::exponential: j["phase"] = "exponential"; break;
    case RadialPhase::none: j["phase"] = "none"; break;
  }
  j["n"] = s.n;
  j["base"] = s.phase == RadialPhase::none ? "0" : "(n-1)/2";
  j["truncation"] = s.truncation;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [beta, c] : s.terms) {
    nlohmann::json t;
    t["beta"] = beta;
    t["re_num"] = rational_string(c.re, true);
    t["re_den"] = rational_string(c.re, false);
    t["im_num"] = rational_string(c.im, true);
    t["im_den"] = rational_string(c.im, false);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

RadialSeries series_from_json(const nlohmann::json& j) {
  RadialSeries s;
  std::string phase = j.at("phase").get<std::string>();
  if (phase == "oscillatory_minus")
    s.phase = RadialPhase::oscillatory_minus;
  else if (phase == "oscillatory_plus")
    s.phase = RadialPhase::oscillatory_plus;
  else if (phase == "exponential")
    s.phase = RadialPhase::exponential;
  else if (phase == "none")
    s.phase = RadialPhase::none;
  else
    throw IoError("unknown series phase: " + phase);
  s.n = j.at("n").get<int>();
  s.base = (s.phase == RadialPhase::none) ? Rational(0) : Rational(s.n - 1, 2);
  s.truncation = j.at("truncation").get<int>();
  for (const auto& t : j.at("terms")) {
    s.add_term(t.at("beta").get<int>(),
               CRat(rational_from_strings(t.at("re_num"), t.at("re_den")),
                    rational_from_strings(t.at("im_num"), t.at("im_den"))));
  }
  return s;
}

std::string arcs_to_csv(const std::vector<GreatCircleArc>& arcs) {
  if (arcs.empty()) throw ValidationError("no arcs to serialize");
  const int n = arcs.front().dim();
  std::ostringstream out;
  for (int i = 1; i <= n; ++i) out << "omega_" << i << ",";
  for (int i = 1; i <= n; ++i) out << "v_" << i << (i == n ? "" : ",");
  out << "\n";
  for (const auto& arc : arcs) {
    for (int i = 0; i < n; ++i) out << format_double(arc.omega[i]) << ",";
    for (int i = 0; i < n; ++i) out << format_double(arc.v[i]) << (i == n - 1 ? "" : ",");
    out << "\n";
  }
  return out.str();
}

std::vector<GreatCircleArc> arcs_from_csv(const std::string& text) {
  auto lines = lines_of(text);
  if (lines.size() < 2) throw IoError("arc csv has no rows");
  auto header = split(lines[0], ',');
  if (header.size() % 2 != 0) throw IoError("arc csv header malformed");
  const int n = static_cast<int>(header.size()) / 2;
  std::vector<GreatCircleArc> arcs;
  for (size_t li = 1; li < lines.size(); ++li) {
    auto cells = split(lines[li], ',');
    if (static_cast<int>(cells.size()) != 2 * n) throw IoError("arc csv row malformed");
    std::vector<double> omega(n), v(n);
    for (int i = 0; i < n; ++i) omega[i] = parse_double(cells[i]);
    for (int i = 0; i < n; ++i) v[i] = parse_double(cells[n + i]);
    arcs.push_back(GreatCircleArc::checked(SpherePoint{std::move(omega)},
                                           SpherePoint{std::move(v)}, 1e-9));
  }
  return arcs;
}

std::string samples_to_csv(const std::vector<TransformSample>& samples) {
  if (samples.empty()) throw ValidationError("no samples to serialize");
  const int n = samples.front().arc.dim();
  std::ostringstream out;
  for (int i = 1; i <= n; ++i) out << "omega_" << i << ",";
  for (int i = 1; i <= n; ++i) out << "v_" << i << ",";
  out << "j,alpha,re,im\n";
  for (const auto& s : samples) {
    for (int i = 0; i < n; ++i) out << format_double(s.arc.omega[i]) << ",";
    for (int i = 0; i < n; ++i) out << format_double(s.arc.v[i]) << ",";
    out << s.j << "," << format_double(s.alpha_shift) << "," << format_double(s.value.real())
        << "," << format_double(s.value.imag()) << "\n";
  }
  return out.str();
}

std::string symbol_rows_to_csv(const std::vector<GreatCircleArc>& arcs, double lambda, int r,
                               const std::vector<std::complex<double>>& values) {
  if (arcs.size() != values.size()) throw ValidationError("arc/value count mismatch");
  if (arcs.empty()) throw ValidationError("no symbol rows to serialize");
  const int n = arcs.front().dim();
  std::ostringstream out;
  for (int i = 1; i <= n; ++i) out << "omega_" << i << ",";
  for (int i = 1; i <= n; ++i) out << "v_" << i << ",";
  out << "lambda,r,re,im\n";
  for (size_t a = 0; a < arcs.size(); ++a) {
    for (int i = 0; i < n; ++i) out << format_double(arcs[a].omega[i]) << ",";
    for (int i = 0; i < n; ++i) out << format_double(arcs[a].v[i]) << ",";
    out << format_double(lambda) << "," << r << "," << format_double(values[a].real()) << ","
        << format_double(values[a].imag()) << "\n";
  }
  return out.str();
}

SymbolCsv symbol_rows_from_csv(const std::string& text) {
  auto lines = lines_of(text);
  if (lines.size() < 2) throw IoError("symbol csv has no rows");
  auto header = split(lines[0], ',');
  if (header.size() < 6 || (header.size() - 4) % 2 != 0)
    throw IoError("symbol csv header malformed");
  const int n = static_cast<int>(header.size() - 4) / 2;
  SymbolCsv out;
  for (size_t li = 1; li < lines.size(); ++li) {
    auto cells = split(lines[li], ',');
    if (cells.size() != header.size()) throw IoError("symbol csv row malformed");
    double lambda = parse_double(cells[2 * n]);
    int r = static_cast<int>(parse_double(cells[2 * n + 1]));
    if (li == 1) {
      out.lambda = lambda;
      out.r = r;
    } else if (lambda != out.lambda || r != out.r) {
      throw IoError("symbol csv mixes (lambda, r) blocks");
    }
    out.values.emplace_back(parse_double(cells[2 * n + 2]), parse_double(cells[2 * n + 3]));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("short write to " + path);
}

}  // namespace xscat
