#include "cgoeit/bie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace cgoeit {

namespace {

BoundaryOperator nodal(const BoundaryOperator& op, const BoundaryMesh& mesh,
                       const HarmonicBasis& basis) {
  return op.rep == Representation::Nodal ? op : to_nodal(op, basis, mesh);
}

CVector plane_wave(const CVec3& zeta, const std::vector<Vec3>& pts) {
  CVector e(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    e(static_cast<Eigen::Index>(i)) = std::exp(kI * bdot(zeta, pts[i]));
  }
  return e;
}

BoundaryOperator make_kzeta(CMatrix m, const BoundaryMesh& mesh, int L) {
  BoundaryOperator K;
  K.kind = OperatorKind::Kzeta;
  K.rep = Representation::Nodal;
  K.matrix = std::move(m);
  K.level = mesh.level;
  K.degree_max = L;
  return K;
}

void finish(BieSolution& sol, double rcond) {
  sol.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!std::isfinite(sol.residual) || !sol.trace.allFinite() || !sol.coeffs.allFinite()) {
    sol.ok = false;
    sol.status = "solver failure";
  } else if (sol.condition > kConditionThreshold) {
    sol.ok = false;
    sol.status = "possible exceptional point";
  } else {
    sol.ok = true;
    sol.status = "ok";
  }
}

}  // namespace

BoundaryOperator assemble_kzeta(const LayerOperator& S, const BoundaryOperator& lambda_q,
                                const LayerOperator& B, const BoundaryMesh& mesh,
                                const HarmonicBasis& basis) {
  if (S.kind != LayerKind::S || B.kind != LayerKind::B) {
    throw UsageError("assemble_kzeta expects S and B layer operators");
  }
  CMatrix K = S.matrix * nodal(lambda_q, mesh, basis).matrix - B.matrix;
  K.diagonal().array() -= 0.5;
  return make_kzeta(std::move(K), mesh, lambda_q.degree_max);
}

BoundaryOperator assemble_kzeta(const LayerOperator& S, const BoundaryOperator& lambda_q,
                                const BoundaryOperator& lambda_0, const BoundaryMesh& mesh,
                                const HarmonicBasis& basis) {
  if (S.kind != LayerKind::S) throw UsageError("assemble_kzeta expects an S layer operator");
  const CMatrix D = nodal(lambda_q, mesh, basis).matrix - nodal(lambda_0, mesh, basis).matrix;
  return make_kzeta(S.matrix * D, mesh, lambda_q.degree_max);
}

BieSolution solve_bie(const BoundaryOperator& K, const CVec3& zeta, const BoundaryMesh& mesh) {
  if (K.rep != Representation::Nodal || K.dim() != static_cast<Eigen::Index>(mesh.size())) {
    throw UsageError("solve_bie needs a nodal operator on this mesh");
  }
  CMatrix A = K.matrix;
  A.diagonal().array() += 1.0;
  const CVector e = plane_wave(zeta, mesh.nodes);
  const Eigen::PartialPivLU<CMatrix> lu(A);
  BieSolution sol;
  sol.zeta = zeta;
  sol.trace = lu.solve(e);
  sol.trace += lu.solve(e - A * sol.trace);  // one refinement step
  sol.residual = (e - A * sol.trace).norm() / e.norm();
  finish(sol, lu.rcond());
  return sol;
}

BieSolution solve_bie_bandlimited(const BandLimitedSingleLayer& S, const CMatrix& delta_lambda,
                                  const std::vector<Vec3>& trace_points) {
  const int L = S.degree();
  const Eigen::Index nb = harmonic_count(L);
  if (delta_lambda.rows() != nb || delta_lambda.cols() != nb) {
    throw UsageError("Lambda_q - Lambda_0 has the wrong size for this degree");
  }
  const CVector pe = harmonic_exponential_coefficients(S.zeta(), L);
  CMatrix A = S.galerkin() * delta_lambda;
  A.diagonal().array() += 1.0;
  const Eigen::PartialPivLU<CMatrix> lu(A);
  BieSolution sol;
  sol.zeta = S.zeta();
  sol.coeffs = lu.solve(pe);
  sol.coeffs += lu.solve(pe - A * sol.coeffs);
  const double pn = pe.norm();
  sol.residual = pn > 0.0 ? (pe - A * sol.coeffs).norm() / pn : 0.0;
  sol.density = delta_lambda * sol.coeffs;
  if (!trace_points.empty()) {
    sol.trace = plane_wave(S.zeta(), trace_points) - S.evaluate(trace_points) * sol.density;
  }
  finish(sol, lu.rcond());
  return sol;
}

ExteriorReport verify_exterior_equivalence(const BieSolution& sol,
                                           const BandLimitedSingleLayer& S) {
  ExteriorReport rep;
  const CVec3& zeta = S.zeta();
  const CVector& sigma = sol.density;
  const SphereQuadrature probe = build_sphere_quadrature(std::max(8, 2 * S.degree()));
  const auto scaled = [&](double r) {
    std::vector<Vec3> pts;
    pts.reserve(probe.size());
    for (const Vec3& p : probe.points) pts.push_back(r * p);
    return pts;
  };
  auto psi = [&](const std::vector<Vec3>& pts) -> CVector {
    return plane_wave(zeta, pts) - S.evaluate(pts) * sigma;
  };

  // Trace: psi from outside tends to f = e - S sigma on the sphere.
  const double eps = 1e-4;
  const CVector f = psi(scaled(1.0));
  const CVector outer = psi(scaled(1.0 + eps));
  rep.trace_defect = (outer - f).cwiseAbs().maxCoeff() / std::max(f.cwiseAbs().maxCoeff(), 1e-300);

  // Neumann: d psi/dnu+ equals Lambda_q f = d e/dnu - dS sigma/dnu- + sigma.
  // One-sided second-order differences on each side of the sphere.
  const double d = 1e-3;
  const auto one_sided = [&](double sign) {
    const CMatrix S0 = S.evaluate(scaled(1.0));
    const CMatrix S1 = S.evaluate(scaled(1.0 + sign * d));
    const CMatrix S2 = S.evaluate(scaled(1.0 + 2.0 * sign * d));
    return CVector(((-3.0 * S0 + 4.0 * S1 - S2) * sigma) / (2.0 * sign * d));
  };
  const CVector dS_out = one_sided(1.0);
  const CVector dS_in = one_sided(-1.0);
  const RMatrix Y = probe.basis(S.degree());
  const CVector sigma_nodal = Y.cast<cdouble>() * sigma;
  const CVector jump = dS_in - dS_out - sigma_nodal;
  rep.neumann_defect =
      jump.cwiseAbs().maxCoeff() / std::max(sigma_nodal.cwiseAbs().maxCoeff(), 1e-300);

  // Mean value property on small spheres around exterior points.
  const SphereQuadrature small = build_sphere_quadrature(12);
  const double rho = 0.2;
  double worst = 0.0;
  for (const Vec3& c : {Vec3(1.5, 0, 0), Vec3(0, -1.5, 0), Vec3(0, 0, 1.6), Vec3(0.9, 0.9, 0.9)}) {
    std::vector<Vec3> pts;
    for (const Vec3& p : small.points) pts.push_back(c + rho * p);
    const CVector vals = psi(pts);
    cdouble mean = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      mean += small.weights[i] * vals(static_cast<Eigen::Index>(i));
    }
    mean /= 4.0 * kPi;
    const cdouble center = psi({c})(0);
    worst = std::max(worst, std::abs(mean - center) / std::max(vals.cwiseAbs().maxCoeff(), 1e-300));
  }
  rep.mean_value_defect = worst;

  // Radiation: exp(-i x.zeta) psi - 1 = -exp(-i x.zeta) S sigma decays.
  rep.radiation_near = (S.evaluate_scaled(scaled(2.0)) * sigma).cwiseAbs().maxCoeff();
  rep.radiation_far = (S.evaluate_scaled(scaled(4.0)) * sigma).cwiseAbs().maxCoeff();
  rep.radiation_decreasing = rep.radiation_far < rep.radiation_near || rep.radiation_near == 0.0;
  return rep;
}

}  // namespace cgoeit
