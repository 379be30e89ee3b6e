#pragma once

#include <string>
#include <vector>

#include "cgoeit/common.hpp"
#include "cgoeit/forward_dtn.hpp"
#include "cgoeit/layer_potentials.hpp"

namespace cgoeit {

inline constexpr double kConditionThreshold = 1e12;

/// K = S Lambda_q - B - I/2 in nodal rep. Lambda_q is converted to nodal rep
/// if needed.
BoundaryOperator assemble_kzeta(const LayerOperator& S, const BoundaryOperator& lambda_q,
                                const LayerOperator& B, const BoundaryMesh& mesh,
                                const HarmonicBasis& basis);
/// The equivalent difference form K = S (Lambda_q - Lambda_0).
BoundaryOperator assemble_kzeta(const LayerOperator& S, const BoundaryOperator& lambda_q,
                                const BoundaryOperator& lambda_0, const BoundaryMesh& mesh,
                                const HarmonicBasis& basis);

struct BieSolution {
  CVec3 zeta = CVec3::Zero();
  /// Boundary trace f_zeta at mesh nodes (nodal solve) or at the requested
  /// points (band-limited solve).
  CVector trace;
  /// Degree <= L harmonic coefficients of f_zeta (band-limited solve).
  CVector coeffs;
  /// Band-limited solve: Lambda_q - Lambda_0 applied to f, as coefficients.
  CVector density;
  double residual = 0.0;
  double condition = 0.0;
  bool ok = false;
  std::string status;
};

/// Dense LU solve of (I + K) f = exp(i x.zeta) at the mesh nodes with one step
/// of iterative refinement. A condition estimate above the threshold is
/// reported in the status, not thrown.
BieSolution solve_bie(const BoundaryOperator& K, const CVec3& zeta, const BoundaryMesh& mesh);

/// Band-limited form used for sweeps. With D = Lambda_q - Lambda_0 known as a
/// (L+1)^2 matrix, f = e - S D f only depends on c = P f through D, so
///   (I + P S Y D) c = P e,   f = e - S Y D c.
/// The trace is evaluated at the given points (may be empty).
BieSolution solve_bie_bandlimited(const BandLimitedSingleLayer& S, const CMatrix& delta_lambda,
                                  const std::vector<Vec3>& trace_points = {});

struct ExteriorReport {
  double trace_defect = 0.0;        // |psi(x(1+eps)) - f| / |f| extrapolated to eps -> 0
  double mean_value_defect = 0.0;   // harmonicity at exterior probes
  double radiation_near = 0.0;      // sup |exp(-i x.zeta) psi - 1| on |x| = 2
  double radiation_far = 0.0;       // same on |x| = 4
  double neumann_defect = 0.0;      // |d psi/dnu+ - Lambda_q f| / |Lambda_q f|, projected
  bool radiation_decreasing = false;
};

/// Checks of the exterior problem solved by a band-limited BIE solution.
ExteriorReport verify_exterior_equivalence(const BieSolution& sol,
                                           const BandLimitedSingleLayer& S);

}  // namespace cgoeit
