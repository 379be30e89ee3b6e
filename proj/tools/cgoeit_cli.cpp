// Command-line driver: simulate, reconstruct, verify.
//
// Exit codes: 0 ok, 1 verify failure, 2 configuration or integrity error,
// 3 solver failure, 4 sweep abort. Errors are printed to stderr as one JSON
// object.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cgoeit/diagnostics.hpp"
#include "cgoeit/pipeline.hpp"

using namespace cgoeit;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> phantom;
  std::optional<int> mesh_level, degree, grid_n;
  std::optional<double> pad, kappa, zeta_min, xi_cutoff, xi_spacing, noise;
  std::optional<std::string> method, output;
  std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file; flags override its fields");
  cmd->add_option("--phantom", o.phantom, "named phantom or phantom JSON file");
  cmd->add_option("--mesh-level", o.mesh_level, "sphere mesh level");
  cmd->add_option("--degree", o.degree, "harmonic degree L");
  cmd->add_option("--grid-n", o.grid_n, "volume grid points per axis");
  cmd->add_option("--pad", o.pad, "box padding beyond the unit ball");
  cmd->add_option("--kappa", o.kappa, "|zeta| = max(zeta_min, kappa |xi|)");
  cmd->add_option("--zeta-min", o.zeta_min, "smallest |zeta| in the sweep");
  cmd->add_option("--xi-cutoff", o.xi_cutoff, "frequency cutoff Xi");
  cmd->add_option("--xi-spacing", o.xi_spacing, "xi grid spacing (0: pi/(1+pad))");
  cmd->add_option("--method", o.method, "boundary or texp")->check(CLI::IsMember({"boundary", "texp"}));
  cmd->add_option("--noise", o.noise, "relative Frobenius noise on Lambda_gamma");
  cmd->add_option("--seed", o.seed, "noise seed");
  cmd->add_option("--output", o.output, "run directory");
}

RunConfig resolve(const Overrides& o) {
  Json j = Json::object();
  std::filesystem::path base;
  if (!o.config.empty()) {
    try {
      j = Json::parse(read_text(o.config));
    } catch (const Json::exception& e) {
      throw UsageError("config " + o.config + ": " + e.what());
    }
    base = std::filesystem::path(o.config).parent_path();
  }
  if (o.phantom) j["phantom"] = *o.phantom;
  if (o.mesh_level) j["mesh_level"] = *o.mesh_level;
  if (o.degree) j["degree"] = *o.degree;
  if (o.grid_n) j["grid_n"] = *o.grid_n;
  if (o.pad) j["pad"] = *o.pad;
  if (o.kappa) j["kappa"] = *o.kappa;
  if (o.zeta_min) j["zeta_min"] = *o.zeta_min;
  if (o.xi_cutoff) j["xi_cutoff"] = *o.xi_cutoff;
  if (o.xi_spacing) j["xi_spacing"] = *o.xi_spacing;
  if (o.method) j["method"] = *o.method;
  if (o.noise) j["noise"] = *o.noise;
  if (o.seed) j["seed"] = *o.seed;
  RunConfig cfg = RunConfig::from_json(j, base);
  // A flag-given output path is taken relative to the working directory.
  if (o.output) cfg.output = *o.output;
  return cfg;
}

int fail(int code, const std::string& kind, const std::string& message, Json extra = Json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  extra["exit_code"] = code;
  std::cerr << extra.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex admittivity reconstruction from DtN data on the unit ball"};
  app.require_subcommand(1);
  Overrides sim_o, rec_o, ver_o;
  auto* sim = app.add_subcommand("simulate", "compute Lambda_gamma and Lambda_1 for a phantom");
  auto* rec = app.add_subcommand("reconstruct", "reconstruct gamma from a simulated run directory");
  auto* ver = app.add_subcommand("verify", "run the property suites and print a JSON report");
  add_flags(sim, sim_o);
  add_flags(rec, rec_o);
  add_flags(ver, ver_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(2, "usage", e.what());
  }

  try {
    if (sim->parsed()) {
      std::cout << run_simulate(resolve(sim_o)).dump(2) << std::endl;
      return 0;
    }
    if (rec->parsed()) {
      std::cout << run_reconstruct(resolve(rec_o)).dump(2) << std::endl;
      return 0;
    }
    const DiagnosticsReport report = run_diagnostics(resolve(ver_o));
    std::cout << report.to_json().dump(2) << std::endl;
    return report.pass() ? 0 : 1;
  } catch (const IntegrityError& e) {
    return fail(2, "integrity", e.what());
  } catch (const UsageError& e) {
    return fail(2, "config", e.what());
  } catch (const SweepAbort& e) {
    return fail(4, "sweep_abort", e.what(), {{"failed", e.failed()}});
  } catch (const SolverError& e) {
    return fail(3, "solver", e.what(), {{"residual", e.residual()}});
  } catch (const Error& e) {
    return fail(3, "solver", e.what());
  } catch (const std::exception& e) {
    return fail(3, "internal", e.what());
  }
}
