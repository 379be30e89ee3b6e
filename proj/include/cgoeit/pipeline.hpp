#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cgoeit/forward_dtn.hpp"
#include "cgoeit/inversion.hpp"
#include "cgoeit/io.hpp"
#include "cgoeit/phantom.hpp"
#include "cgoeit/scattering.hpp"

namespace cgoeit {

/// Named phantoms: "constant" (gamma = 1), "two_layer" (1.5 + 0.5i plateau for
/// r <= 0.4, quintic transition to 1 at r = 0.84) and "small_contrast"
/// (1 + (0.05 + 0.02i) bump of radius 0.6).
PhantomSpec named_phantom(const std::string& name);
PhantomSpec phantom_from_json(const Json& j);
Json phantom_to_json(const PhantomSpec& spec);

/// Everything a run needs. JSON keys match the field names.
struct RunConfig {
  PhantomSpec phantom = named_phantom("two_layer");
  int mesh_level = 3;
  int degree = 16;
  int grid_n = 64;
  double pad = 0.1;
  double kappa = 1.0;
  double zeta_min = 5.0;
  double xi_cutoff = 8.0;
  double xi_spacing = 0.0;  // 0: matched to the volume box, pi / (1 + pad)
  std::string method = "boundary";
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::filesystem::path output = "run";

  /// Throws UsageError naming the first field out of range.
  void validate() const;
  double effective_xi_spacing() const;
  SweepPolicy policy() const;
  Json to_json() const;
  /// Relative phantom paths resolve against base_dir.
  static RunConfig from_json(const Json& j, const std::filesystem::path& base_dir = {});
};

RunConfig load_config(const std::filesystem::path& path);

/// Adds E with ||E||_F = level ||A||_F, E = (G + G^T)/2 and G complex Gaussian
/// from mt19937_64(seed). Returns the realised relative perturbation.
double add_symmetric_noise(BoundaryOperator& op, double level, std::uint64_t seed);

struct Simulation {
  AdmittivityField field;
  BoundaryOperator lambda_gamma;        // as measured (noise applied)
  BoundaryOperator lambda_gamma_clean;
  BoundaryOperator lambda_1;
  VolumetricReport report;
  double noise_realized = 0.0;
  double seconds = 0.0;
};

Simulation simulate(const RunConfig& cfg);

struct Reconstruction {
  std::vector<ScatteringSample> samples;
  SpectralField spectral;
  PotentialField q;
  VolumeField gamma;
  std::optional<ErrorMetrics> metrics;
  double sweep_seconds = 0.0;
  double seconds = 0.0;
};

/// Lambda_gamma -> Lambda_q (gamma = 1 and d gamma/dnu = 0 on the boundary)
/// -> sweep -> q^ -> q -> gamma. Throws SweepAbort on non-isolated failures.
Reconstruction reconstruct(const RunConfig& cfg, const BoundaryOperator& lambda_gamma,
                           const BoundaryOperator& lambda_1,
                           const VolumeField* gamma_true = nullptr);

Json metrics_to_json(const ErrorMetrics& m);

/// File-level drivers used by the CLI. simulate writes lambda_gamma.bin,
/// lambda_1.bin, phantom.bin and manifest.json; reconstruct checks every
/// input hash before writing samples.json, q_rec.bin, gamma_rec.bin and
/// metrics.json.
Json run_simulate(const RunConfig& cfg);
Json run_reconstruct(const RunConfig& cfg);

}  // namespace cgoeit
