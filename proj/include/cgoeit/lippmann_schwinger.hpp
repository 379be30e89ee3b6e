#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cgoeit/common.hpp"
#include "cgoeit/faddeev.hpp"
#include "cgoeit/phantom.hpp"

namespace cgoeit {

struct KrylovOptions {
  double tolerance = 1e-8;
  int max_iterations = 500;
  int restart = 60;
  /// Plain Neumann (Born) iteration instead of GMRES; a diagnostic mode.
  bool born = false;
};

struct KrylovResult {
  CVector x;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
};

/// Restarted GMRES for (I + A) x = b with A given by its action.
KrylovResult solve_identity_plus(const std::function<CVector(const CVector&)>& apply_A,
                                 const CVector& b, const KrylovOptions& opts);

struct LsSolution {
  ComplexFrequency zeta;
  VolumeField phi;  // exp(-i x.zeta) psi - 1
  VolumeField psi;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
  std::string status;
};

/// Solve (I + g * (q .)) phi = -g * q and return psi = exp(i x.zeta)(1 + phi).
LsSolution lippmann_schwinger_solve(const PotentialField& q, const FaddeevKernel& kernel,
                                    const KrylovOptions& opts = {});

struct MuSolution {
  VolumeField mu;
  VolumeField qtilde;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::string status;
};

/// Threshold below which q~ = q/|q| is set to zero, relative to max |q|.
inline constexpr double kQtildeThreshold = 1e-12;

/// Solve mu = |q| - |q| g * (q~ mu).
MuSolution mu_solve(const PotentialField& q, const FaddeevKernel& kernel,
                    const KrylovOptions& opts = {});

/// Discrete L^2 norm with weight <x>^{delta-1} over the grid box.
double weighted_norm(const VolumeField& f, double delta = 0.75);

}  // namespace cgoeit
