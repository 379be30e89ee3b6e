#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cgoeit/bie.hpp"
#include "cgoeit/common.hpp"
#include "cgoeit/forward_dtn.hpp"
#include "cgoeit/lippmann_schwinger.hpp"

namespace cgoeit {

struct FrequencyPair {
  Vec3 xi = Vec3::Zero();
  CVec3 zeta = CVec3::Zero();
  double a = 0.0;
  Vec3 e2 = Vec3::UnitY();
  Vec3 e3 = Vec3::UnitZ();

  /// |zeta.zeta| / |zeta|^2 and |xi^2 + 2 zeta.xi| / (|xi|^2 + |zeta||xi|).
  double nullity_defect() const;
  double membership_defect() const;
};

/// zeta = -xi/2 + a e2 + i sqrt(a^2 + |xi|^2/4) e3. The frame starts from the
/// first coordinate axis not parallel to xi; frame_seed k rotates (e2, e3) by
/// k * pi/3 about xi.
FrequencyPair zeta_frame(const Vec3& xi, double a, int frame_seed = 0);
/// xi = 0: zeta = (|zeta|/sqrt 2)(e1 + i e2), which lies in the admissible
/// set because only zeta.zeta = 0 is required there.
FrequencyPair zeta_frame_origin(double zeta_norm);
/// a from a target |zeta| (clamped at 0 when |zeta| < |xi|/sqrt 2).
double frame_magnitude(const Vec3& xi, double zeta_norm);

enum class ScatterMethod { Boundary, Volume, Texp };
std::string to_string(ScatterMethod m);
ScatterMethod scatter_method_from_string(const std::string& name);

struct ScatteringSample {
  FrequencyPair pair;
  std::optional<cdouble> t;
  ScatterMethod method = ScatterMethod::Boundary;
  std::string status = "ok";
  double condition = 0.0;
  int quadrature_points = 0;
  int degree = 0;

  bool ok() const { return t.has_value(); }
};

/// Boundary route in the basis of real harmonics. With D = Lambda_q - Lambda_0,
/// v = exp(-i x.(zeta+xi)) and d_nu v = -i (zeta+xi).nu v, the boundary formula
/// reduces by Green's identity to <v, D f>, i.e. t = c^T D P v.
ScatteringSample scattering_transform_boundary(const BoundaryOperator& lambda_q,
                                               const BoundaryOperator& lambda_0,
                                               const FrequencyPair& pair);
/// Same, reusing an assembled band-limited single layer for pair.zeta.
ScatteringSample scattering_transform_boundary(const CMatrix& delta_lambda,
                                               const BandLimitedSingleLayer& S,
                                               const FrequencyPair& pair);
/// t^exp: f replaced by exp(i x.zeta), no BIE solve.
ScatteringSample scattering_transform_texp(const BoundaryOperator& lambda_gamma,
                                           const BoundaryOperator& lambda_1,
                                           const FrequencyPair& pair);
/// Volume route: h^3 sum exp(-i x.xi) q (1 + phi) with phi from the
/// Lippmann-Schwinger solve.
ScatteringSample scattering_transform_volume(const PotentialField& q, const FrequencyPair& pair,
                                             const KrylovOptions& opts = {});

/// q^(xi) = int exp(-i x.xi) q dx by grid quadrature.
cdouble fourier_volume(const PotentialField& q, const Vec3& xi);

struct SweepPolicy {
  double kappa = 1.0;
  double zeta_min = 5.0;
  ScatterMethod method = ScatterMethod::Boundary;
  int frame_seed = 0;

  /// |zeta| = max(zeta_min, kappa |xi|).
  double zeta_norm(const Vec3& xi) const;
};

/// Samples in the order of xis. Failures are tagged, not thrown.
std::vector<ScatteringSample> scattering_sweep(const BoundaryOperator& lambda_q,
                                               const BoundaryOperator& lambda_0,
                                               const std::vector<Vec3>& xis,
                                               const SweepPolicy& policy);

}  // namespace cgoeit
