#include "cgoeit/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace cgoeit {

namespace fs = std::filesystem;

namespace {

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

cdouble complex_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw UsageError("complex values are a number or [re, im], got " + j.dump());
}

Json complex_to_json(cdouble c) { return Json::array({c.real(), c.imag()}); }

Vec3 vec_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw UsageError("expected a 3-vector, got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw UsageError(std::string("config field '") + key + "' has the wrong type");
  }
}

}  // namespace

PhantomSpec named_phantom(const std::string& name) {
  if (name == "constant") return PhantomSpec::constant(1.0);
  if (name == "two_layer") return PhantomSpec::two_layer({1.5, 0.5}, 0.4, 0.44);
  if (name == "small_contrast") return PhantomSpec::bump({0.05, 0.02}, 0.6);
  throw UsageError("unknown phantom name '" + name + "'");
}

namespace {

PhantomSpec parse_phantom(const Json& j) {
  if (!j.is_object()) throw UsageError("phantom must be a name or an object");
  const std::string type = get_or<std::string>(j, "type", "");
  PhantomSpec s;
  if (type == "constant") {
    s = PhantomSpec::constant(complex_from_json(j.value("value", Json(1.0))));
  } else if (type == "two_layer") {
    s = PhantomSpec::two_layer(complex_from_json(j.at("inner")), j.at("radius").get<double>(),
                               j.at("width").get<double>());
  } else if (type == "multilayer") {
    s.type = PhantomType::RadialMultilayer;
    s.layer_radii = j.at("radii").get<std::vector<double>>();
    for (const auto& v : j.at("values")) s.layer_values.push_back(complex_from_json(v));
    s.transition_width = get_or(j, "width", s.transition_width);
  } else if (type == "bump") {
    s = PhantomSpec::bump(complex_from_json(j.at("contrast")), j.at("radius").get<double>(),
                          j.contains("center") ? vec_from_json(j.at("center")) : Vec3::Zero());
  } else if (type == "balls") {
    s.type = PhantomType::SmoothedBalls;
    for (const auto& inc : j.at("inclusions")) {
      s.inclusions.push_back(Inclusion{vec_from_json(inc.at("center")), inc.at("radius").get<double>(),
                                       complex_from_json(inc.at("value"))});
    }
    s.transition_width = get_or(j, "width", s.transition_width);
  } else {
    throw UsageError("unknown phantom type '" + type + "'");
  }
  s.shell_radius = get_or(j, "shell_radius", s.shell_radius);
  s.omega = get_or(j, "omega", s.omega);
  s.validate();
  return s;
}

}  // namespace

PhantomSpec phantom_from_json(const Json& j) {
  if (j.is_string()) return named_phantom(j.get<std::string>());
  try {
    return parse_phantom(j);
  } catch (const Json::exception& e) {
    throw UsageError(std::string("phantom: ") + e.what());
  }
}

Json phantom_to_json(const PhantomSpec& s) {
  Json j;
  switch (s.type) {
    case PhantomType::Constant:
      j = {{"type", "constant"}, {"value", complex_to_json(s.constant_value)}};
      break;
    case PhantomType::RadialMultilayer: {
      Json vals = Json::array();
      for (cdouble v : s.layer_values) vals.push_back(complex_to_json(v));
      j = {{"type", "multilayer"}, {"radii", s.layer_radii}, {"values", vals},
           {"width", s.transition_width}};
      break;
    }
    case PhantomType::SmoothedBalls: {
      Json incs = Json::array();
      for (const auto& inc : s.inclusions) {
        incs.push_back({{"center", {inc.center(0), inc.center(1), inc.center(2)}},
                        {"radius", inc.radius},
                        {"value", complex_to_json(inc.value)}});
      }
      j = {{"type", "balls"}, {"inclusions", incs}, {"width", s.transition_width}};
      break;
    }
  }
  j["shell_radius"] = s.shell_radius;
  j["omega"] = s.omega;
  return j;
}

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw UsageError("config: " + what);
  };
  phantom.validate();
  need(mesh_level >= 0 && mesh_level <= 6, "mesh_level must be in [0, 6]");
  need(degree >= 0 && degree <= 32, "degree must be in [0, 32]");
  need(grid_n >= 16 && grid_n <= 256, "grid_n must be in [16, 256]");
  need(pad > 0.0 && pad <= 1.0, "pad must be in (0, 1]");
  need(kappa > 0.0 && std::isfinite(kappa), "kappa must be positive");
  need(zeta_min > 0.0 && std::isfinite(zeta_min), "zeta_min must be positive");
  need(xi_cutoff > 0.0 && xi_cutoff <= 64.0, "xi_cutoff must be in (0, 64]");
  need(xi_spacing >= 0.0 && std::isfinite(xi_spacing), "xi_spacing must be >= 0");
  need(method == "boundary" || method == "texp", "method must be boundary or texp");
  need(noise >= 0.0 && noise <= 1.0, "noise must be in [0, 1]");
  const double h = 2.0 * (1.0 + pad) / (grid_n - 1);
  need(xi_cutoff <= kPi / h, "xi_cutoff exceeds the grid Nyquist frequency");
}

double RunConfig::effective_xi_spacing() const {
  return xi_spacing > 0.0 ? xi_spacing : default_xi_spacing(pad);
}

SweepPolicy RunConfig::policy() const {
  SweepPolicy p;
  p.kappa = kappa;
  p.zeta_min = zeta_min;
  p.method = scatter_method_from_string(method);
  return p;
}

Json RunConfig::to_json() const {
  return {{"phantom", phantom_to_json(phantom)},
          {"mesh_level", mesh_level},
          {"degree", degree},
          {"grid_n", grid_n},
          {"pad", pad},
          {"kappa", kappa},
          {"zeta_min", zeta_min},
          {"xi_cutoff", xi_cutoff},
          {"xi_spacing", xi_spacing},
          {"method", method},
          {"noise", noise},
          {"seed", seed},
          {"output", output.string()}};
}

RunConfig RunConfig::from_json(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const char* kKeys[] = {"phantom", "mesh_level", "degree", "grid_n", "pad", "kappa",
                                "zeta_min", "xi_cutoff", "xi_spacing", "method", "noise",
                                "seed", "output"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || item.key() == k;
    if (!known) throw UsageError("config: unknown field '" + item.key() + "'");
  }
  RunConfig c;
  if (j.contains("phantom")) {
    const Json& p = j.at("phantom");
    if (p.is_string() && p.get<std::string>().ends_with(".json")) {
      const fs::path path = base_dir / p.get<std::string>();
      try {
        c.phantom = phantom_from_json(Json::parse(read_text(path)));
      } catch (const Json::exception& e) {
        throw UsageError("phantom file " + path.string() + ": " + e.what());
      }
    } else {
      c.phantom = phantom_from_json(p);
    }
  }
  c.mesh_level = get_or(j, "mesh_level", c.mesh_level);
  c.degree = get_or(j, "degree", c.degree);
  c.grid_n = get_or(j, "grid_n", c.grid_n);
  c.pad = get_or(j, "pad", c.pad);
  c.kappa = get_or(j, "kappa", c.kappa);
  c.zeta_min = get_or(j, "zeta_min", c.zeta_min);
  c.xi_cutoff = get_or(j, "xi_cutoff", c.xi_cutoff);
  c.xi_spacing = get_or(j, "xi_spacing", c.xi_spacing);
  c.method = get_or(j, "method", c.method);
  c.noise = get_or(j, "noise", c.noise);
  c.seed = get_or(j, "seed", c.seed);
  c.output = get_or<std::string>(j, "output", c.output.string());
  if (c.output.is_relative() && !base_dir.empty()) c.output = base_dir / c.output;
  c.validate();
  return c;
}

RunConfig load_config(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::exception& e) {
    throw UsageError("config " + path.string() + ": " + e.what());
  }
  return RunConfig::from_json(j, path.parent_path());
}

double add_symmetric_noise(BoundaryOperator& op, double level, std::uint64_t seed) {
  if (level <= 0.0) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index n = op.matrix.rows();
  CMatrix G(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) G(i, j) = {normal(rng), normal(rng)};
  CMatrix E = 0.5 * (G + G.transpose());
  const double base = op.matrix.norm();
  E *= level * base / E.norm();
  op.matrix += E;
  return base > 0.0 ? E.norm() / base : 0.0;
}

Simulation simulate(const RunConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const BoundaryMesh mesh = build_sphere_mesh(cfg.mesh_level);
  const HarmonicBasis basis = build_harmonic_basis(mesh, cfg.degree);
  const VolumeGrid grid(cfg.grid_n, cfg.pad);
  Simulation sim;
  sim.field = eval_phantom(cfg.phantom, grid);
  sim.lambda_gamma_clean = volumetric_dtn(sim.field, mesh, basis, &sim.report);
  sim.lambda_1 = volumetric_dtn(eval_phantom(PhantomSpec::constant(1.0), grid), mesh, basis);
  sim.lambda_gamma = sim.lambda_gamma_clean;
  sim.noise_realized = add_symmetric_noise(sim.lambda_gamma, cfg.noise, cfg.seed);
  sim.seconds = since(t0);
  return sim;
}

Reconstruction reconstruct(const RunConfig& cfg, const BoundaryOperator& lambda_gamma,
                           const BoundaryOperator& lambda_1, const VolumeField* gamma_true) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  if (lambda_gamma.degree_max != lambda_1.degree_max) {
    throw UsageError("Lambda_gamma and Lambda_1 have different degrees");
  }
  const BoundaryMesh mesh = build_sphere_mesh(cfg.mesh_level);
  const HarmonicBasis basis = build_harmonic_basis(mesh, lambda_gamma.degree_max);
  const auto nn = static_cast<Eigen::Index>(mesh.size());
  const BoundaryOperator lambda_q =
      dtn_gamma_to_q(lambda_gamma, CVector::Ones(nn), CVector::Zero(nn), mesh, basis);

  Reconstruction rec;
  const XiGrid xg = build_xi_grid(cfg.xi_cutoff, cfg.effective_xi_spacing());
  rec.samples = scattering_sweep(lambda_q, lambda_1, xg.points, cfg.policy());
  rec.sweep_seconds = since(t0);
  rec.spectral = qhat_from_samples(rec.samples, xg);
  const VolumeGrid grid(cfg.grid_n, cfg.pad);
  rec.q = inverse_fourier(rec.spectral, grid);
  rec.gamma = gamma_from_q(rec.q);
  if (gamma_true) rec.metrics = error_metrics(rec.gamma, *gamma_true);
  rec.seconds = since(t0);
  return rec;
}

Json metrics_to_json(const ErrorMetrics& m) {
  auto v = [](const Vec3& x) { return Json::array({x(0), x(1), x(2)}); };
  return {{"rel_l2_re", m.rel_l2_re},
          {"rel_l2_im", m.rel_l2_im},
          {"rel_l2_re_contrast", m.rel_l2_re_contrast},
          {"max_err_re", m.max_err_re},
          {"max_err_im", m.max_err_im},
          {"im_peak_rec", v(m.im_peak_rec)},
          {"im_center_true", v(m.im_center_true)},
          {"im_peak_distance", m.im_peak_distance}};
}

Json run_simulate(const RunConfig& cfg) {
  const Simulation sim = simulate(cfg);
  Manifest man(cfg.output);
  fs::create_directories(cfg.output);
  write_operator(cfg.output / "lambda_gamma.bin", sim.lambda_gamma);
  write_operator(cfg.output / "lambda_1.bin", sim.lambda_1);
  write_volume(cfg.output / "phantom.bin", sim.field.gamma, "admittivity",
               {{"omega", sim.field.omega}});
  for (const char* f : {"lambda_gamma.bin", "lambda_1.bin", "phantom.bin"}) man.record(f);
  if (cfg.noise > 0.0) {
    write_operator(cfg.output / "lambda_gamma_clean.bin", sim.lambda_gamma_clean);
    man.record("lambda_gamma_clean.bin");
  }
  Json summary = {{"stage", "simulate"},
                  {"seconds", sim.seconds},
                  {"solver_max_residual", sim.report.max_residual},
                  {"solver_max_iterations", sim.report.max_iterations},
                  {"raw_asymmetry", sim.lambda_gamma_clean.raw_asymmetry},
                  {"symmetry_defect", symmetry_defect(sim.lambda_gamma, BoundaryMesh{})},
                  {"noise_realized", sim.noise_realized}};
  man.extra()["config"] = cfg.to_json();
  man.extra()["simulate"] = summary;
  man.save();
  return summary;
}

Json run_reconstruct(const RunConfig& cfg) {
  Manifest man(cfg.output);
  man.load();
  // Check every input before anything is written.
  man.verify("lambda_gamma.bin");
  man.verify("lambda_1.bin");
  const bool have_truth = man.has("phantom.bin");
  if (have_truth) man.verify("phantom.bin");
  const BoundaryOperator lg = read_operator(cfg.output / "lambda_gamma.bin");
  const BoundaryOperator l1 = read_operator(cfg.output / "lambda_1.bin");
  std::optional<VolumeField> truth;
  if (have_truth) {
    truth = read_volume(cfg.output / "phantom.bin");
    if (truth->grid.n != cfg.grid_n || truth->grid.pad != cfg.pad) truth.reset();
  }

  Reconstruction rec;
  try {
    rec = reconstruct(cfg, lg, l1, truth ? &*truth : nullptr);
  } catch (const SweepAbort& abort) {
    // Per-sample conditions for diagnosis; the reconstruction itself is not written.
    const XiGrid xg = build_xi_grid(cfg.xi_cutoff, cfg.effective_xi_spacing());
    const BoundaryMesh mesh = build_sphere_mesh(cfg.mesh_level);
    const HarmonicBasis basis = build_harmonic_basis(mesh, lg.degree_max);
    const auto nn = static_cast<Eigen::Index>(mesh.size());
    const BoundaryOperator lq = dtn_gamma_to_q(lg, CVector::Ones(nn), CVector::Zero(nn), mesh, basis);
    const fs::path report = cfg.output / "sweep_report.json";
    write_text(report, samples_to_json(scattering_sweep(lq, l1, xg.points, cfg.policy())).dump(2));
    throw SweepAbort(std::string(abort.what()) + "; per-sample conditions in " + report.string(),
                     abort.failed());
  }

  write_text(cfg.output / "samples.json", samples_to_json(rec.samples).dump(2));
  write_volume(cfg.output / "q_rec.bin", rec.q.q, "potential");
  write_volume(cfg.output / "gamma_rec.bin", rec.gamma, "admittivity");
  Json summary = {{"stage", "reconstruct"},
                  {"seconds", rec.seconds},
                  {"sweep_seconds", rec.sweep_seconds},
                  {"samples", rec.samples.size()},
                  {"gaps_filled", rec.spectral.gaps_filled},
                  {"xi_zero_rule", "direct zeta = (|zeta|/sqrt 2)(e1 + i e2)"}};
  if (rec.metrics) summary["metrics"] = metrics_to_json(*rec.metrics);
  write_text(cfg.output / "metrics.json", summary.dump(2));
  for (const char* f : {"samples.json", "q_rec.bin", "gamma_rec.bin", "metrics.json"}) man.record(f);
  man.extra()["reconstruct"] = summary;
  man.save();
  return summary;
}

}  // namespace cgoeit
