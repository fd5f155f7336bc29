// xscat command-line front end.  Links the C API only.

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "xscat.h"

namespace {

struct ContextGuard {
  xscat_context* ctx = nullptr;
  ~ContextGuard() { xscat_context_destroy(ctx); }
};

int fail(xscat_context* ctx, int code) {
  std::fprintf(stderr, "xscat: error (%d): %s\n", code, xscat_last_error(ctx));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted tensor X-ray transforms, transport symbols, and the "
               "multi-energy reconstruction pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  bool verbose = false;
  app.add_option("--config", config_path, "run configuration (JSON)")->required();
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--threads", threads, "worker threads (default: config value)");
  app.add_flag("--verbose", verbose, "progress notes on stderr");

  auto* gen = app.add_subcommand("gen", "write ground-truth tensors and arc samples");
  auto* forward = app.add_subcommand("forward", "write symbol data per (level, energy)");
  auto* invert = app.add_subcommand("invert", "recover coefficients and write the report");
  auto* check = app.add_subcommand("check", "run the module invariant suites");
  auto* expand = app.add_subcommand("expand", "write boundary-expansion artifacts");
  for (auto* sub : {gen, forward, invert, check, expand}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  ContextGuard guard;
  int rc = xscat_context_create(&guard.ctx);
  if (rc != XSCAT_OK) {
    std::fprintf(stderr, "xscat: cannot create context\n");
    return rc;
  }
  xscat_context* ctx = guard.ctx;

  if (verbose) std::fprintf(stderr, "xscat %s: loading %s\n", xscat_version(), config_path.c_str());
  rc = xscat_config_load_file(ctx, config_path.c_str());
  if (rc != XSCAT_OK) return fail(ctx, rc);
  if (threads > 0) {
    rc = xscat_set_threads(ctx, threads);
    if (rc != XSCAT_OK) return fail(ctx, rc);
  }

  char* report = nullptr;
  if (gen->parsed()) {
    rc = xscat_run_gen(ctx, out_dir.c_str(), nullptr);
  } else if (forward->parsed()) {
    rc = xscat_run_forward(ctx, out_dir.c_str(), nullptr);
  } else if (invert->parsed()) {
    rc = xscat_run_invert(ctx, out_dir.c_str(), &report);
  } else if (check->parsed()) {
    rc = xscat_run_check(ctx, out_dir.c_str(), &report);
  } else if (expand->parsed()) {
    rc = xscat_run_expand(ctx, out_dir.c_str(), nullptr);
  }

  if (report) {
    std::fputs(report, stdout);
    xscat_string_free(report);
  }
  if (rc != XSCAT_OK) return fail(ctx, rc);
  if (verbose) std::fprintf(stderr, "xscat: done\n");
  return 0;
}
