#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cgoeit/io.hpp"
#include "cgoeit/pipeline.hpp"

namespace cgoeit {

/// One measured property with its bound.
struct Check {
  std::string name;
  double value = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  Json data = Json::object();

  bool pass() const { return std::isfinite(value) && value >= lower && value <= upper; }
  Json to_json() const;
};

struct Suite {
  std::string name;
  std::vector<Check> checks;
  Json tables = Json::object();
  double seconds = 0.0;

  bool pass() const;
  Json to_json() const;
};

struct DiagnosticsReport {
  std::vector<Suite> suites;
  Json info = Json::object();

  bool pass() const;
  Json to_json() const;
};

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Declared relative tolerance of the 7-point Laplacian applied to H_zeta:
/// |Lap_h H| <= tol |zeta|^2 max|H| over the stencil, tol = (h|zeta|)^2/4 + 1e-7.
double harmonicity_tolerance(double h, double zeta_norm);

/// Largest |Lap_h H| / (|zeta|^2 max|H|) over interior nodes of the kernel's
/// difference grid.
double harmonicity_residual(const FaddeevKernel& kernel);

/// Relative defects of the four jump relations for a random density of
/// degree <= L (seeded), nodal operators at the given level.
struct JumpDefects {
  double double_outside = 0.0, double_inside = 0.0;
  double dsingle_outside = 0.0, dsingle_inside = 0.0;
  double max() const;
};
JumpDefects jump_defects(const BoundaryMesh& mesh, const CVec3& zeta, int L, std::uint64_t seed);

/// ||Hcal_zeta|| as an operator on L^2 of the sphere (mesh-weighted 2-norm).
double hcal_norm(const BoundaryMesh& mesh, const CVec3& zeta);

/// L^2(sphere) norm of f_zeta - 1 from a band-limited BIE solve at the
/// origin frame.
double trace_defect_from_one(const CMatrix& delta_lambda, const BoundaryMesh& mesh, double zeta_norm,
                             int L);

Suite faddeev_suite(const VolumeGrid& grid);
Suite layer_suite(int level, int L);
/// Needs Lambda_q and Lambda_0 in basis rep.
Suite bie_suite(const BoundaryOperator& lambda_q, const BoundaryOperator& lambda_0, int level);
Suite dtn_suite(const BoundaryOperator& lambda_gamma, const BoundaryOperator& lambda_1);

/// All suites for a run. DtN data come from the run directory when it holds a
/// verified manifest, otherwise they are simulated from the config.
DiagnosticsReport run_diagnostics(const RunConfig& cfg);

}  // namespace cgoeit
