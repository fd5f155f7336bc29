#include "xscat.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

#include "xscat/pipeline.hpp"
#include "xscat/serialize.hpp"

using namespace xscat;

struct xscat_context {
  std::optional<RunConfig> config;
  std::string last_error;
  int thread_override = 0;
};

namespace {

int set_error(xscat_context* ctx, const std::string& message, Status code) {
  if (ctx) ctx->last_error = message;
  return static_cast<int>(code);
}

template <typename Fn>
int guarded(xscat_context* ctx, Fn&& fn) {
  if (!ctx) return XSCAT_ERR_VALIDATION;
  try {
    ctx->last_error.clear();
    return fn();
  } catch (const Error& e) {
    return set_error(ctx, e.what(), e.code());
  } catch (const std::exception& e) {
    return set_error(ctx, e.what(), Status::internal);
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

RunConfig& require_config(xscat_context* ctx) {
  if (!ctx->config) throw ValidationError("no configuration loaded");
  RunConfig& c = *ctx->config;
  if (ctx->thread_override > 0) c.threads = ctx->thread_override;
  return c;
}

using Command = nlohmann::json (*)(const RunConfig&, const std::string&);

int run_command(xscat_context* ctx, Command command, const char* out_dir, char** report_json) {
  return guarded(ctx, [&] {
    if (!out_dir) throw ValidationError("out_dir is required");
    nlohmann::json report = command(require_config(ctx), out_dir);
    if (report_json) *report_json = dup_string(report.dump(2) + "\n");
    return XSCAT_OK;
  });
}

}  // namespace

extern "C" {

const char* xscat_version(void) { return "0.1.0"; }

int xscat_context_create(xscat_context** out) {
  if (!out) return XSCAT_ERR_VALIDATION;
  *out = new (std::nothrow) xscat_context();
  return *out ? XSCAT_OK : XSCAT_ERR_INTERNAL;
}

void xscat_context_destroy(xscat_context* ctx) { delete ctx; }

const char* xscat_last_error(const xscat_context* ctx) {
  return ctx ? ctx->last_error.c_str() : "";
}

int xscat_config_load_file(xscat_context* ctx, const char* path) {
  return guarded(ctx, [&] {
    if (!path) throw ValidationError("path is required");
    ctx->config = RunConfig::load_file(path);
    return XSCAT_OK;
  });
}

int xscat_config_load_json(xscat_context* ctx, const char* json_text) {
  return guarded(ctx, [&] {
    if (!json_text) throw ValidationError("json_text is required");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("config parse error: ") + e.what());
    }
    ctx->config = RunConfig::from_json(j);
    return XSCAT_OK;
  });
}

int xscat_set_threads(xscat_context* ctx, int threads) {
  return guarded(ctx, [&] {
    if (threads < 1) throw ValidationError("threads must be positive");
    ctx->thread_override = threads;
    return XSCAT_OK;
  });
}

int xscat_run_gen(xscat_context* ctx, const char* out_dir, char** report_json) {
  return run_command(ctx, &cmd_gen, out_dir, report_json);
}

int xscat_run_forward(xscat_context* ctx, const char* out_dir, char** report_json) {
  return run_command(ctx, &cmd_forward, out_dir, report_json);
}

int xscat_run_invert(xscat_context* ctx, const char* out_dir, char** report_json) {
  return run_command(ctx, &cmd_invert, out_dir, report_json);
}

int xscat_run_check(xscat_context* ctx, const char* out_dir, char** report_json) {
  return run_command(ctx, &cmd_check, out_dir, report_json);
}

int xscat_run_expand(xscat_context* ctx, const char* out_dir, char** report_json) {
  return run_command(ctx, &cmd_expand, out_dir, report_json);
}

void xscat_string_free(char* s) { std::free(s); }

int xscat_weighted_xray(xscat_context* ctx, const char* tensor_json, const double* omega,
                        const double* v, int n, int j, int quadrature_order, double* re,
                        double* im) {
  return guarded(ctx, [&] {
    if (!tensor_json || !omega || !v || !re || !im)
      throw ValidationError("null argument");
    if (n < 2) throw ValidationError("n must be >= 2");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(tensor_json);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("tensor parse error: ") + e.what());
    }
    SymTensorField mu = tensor_from_json(doc);
    if (mu.dim() != n) throw ValidationError("tensor dimension mismatch");
    GreatCircleArc arc = GreatCircleArc::checked(
        SpherePoint::checked(std::vector<double>(omega, omega + n), 1e-9),
        SpherePoint::checked(std::vector<double>(v, v + n), 1e-9), 1e-9);
    auto rule = QuadratureRule::gauss_legendre(quadrature_order > 0 ? quadrature_order : 128);
    auto value = weighted_xray(mu, arc, j, rule);
    *re = value.real();
    *im = value.imag();
    return XSCAT_OK;
  });
}

int xscat_separate_degrees(xscat_context* ctx, const double* lambdas, int count,
                           const double* values_re, const double* values_im, int max_degree,
                           double* coeff_re, double* coeff_im, double* condition_number) {
  return guarded(ctx, [&] {
    if (!lambdas || !values_re || !coeff_re || !coeff_im)
      throw ValidationError("null argument");
    if (count < 1) throw ValidationError("count must be positive");
    EnergyGrid grid = EnergyGrid::checked(std::vector<double>(lambdas, lambdas + count));
    std::vector<std::complex<double>> values(count);
    for (int i = 0; i < count; ++i)
      values[i] = {values_re[i], values_im ? values_im[i] : 0.0};
    auto res = separate_degrees(values, grid, max_degree);
    for (int d = 0; d <= max_degree; ++d) {
      coeff_re[d] = res.coefficients[d].real();
      coeff_im[d] = res.coefficients[d].imag();
    }
    if (condition_number) *condition_number = res.condition_number;
    return XSCAT_OK;
  });
}

int xscat_c_alpha(xscat_context* ctx, int n, int k, long lambda_num, long lambda_den,
                  int alpha, double* re, double* im) {
  return guarded(ctx, [&] {
    if (!re || !im) throw ValidationError("null argument");
    if (lambda_den == 0) throw ValidationError("lambda denominator must be nonzero");
    CRat c = c_alpha(n, k, make_rational(lambda_num, lambda_den), alpha);
    *re = to_double(c.re);
    *im = to_double(c.im);
    return XSCAT_OK;
  });
}

}  // extern "C"
