#include <doctest.h>

#include "cgoeit/bie.hpp"
#include "cgoeit/diagnostics.hpp"
#include "cgoeit/scattering.hpp"

using namespace cgoeit;

namespace {

// Lambda_q - Lambda_0 for the two-layer phantom from the radial oracle.
CMatrix radial_delta(int L) {
  const PhantomSpec s = PhantomSpec::two_layer({1.5, 0.5}, 0.4, 0.1);
  const auto lam = radial_dtn(RadialProfile::from_phantom(s), L);
  const auto lg = radial_dtn_operator(lam, OperatorKind::DtnGamma);
  const auto l0 = radial_dtn_operator(radial_dtn(RadialProfile::constant(1.0), L), OperatorKind::DtnZero);
  return lg.matrix - l0.matrix;
}

CVector exp_trace(const CVec3& z, const std::vector<Vec3>& pts) {
  CVector e(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) e(static_cast<Eigen::Index>(i)) = std::exp(kI * bdot(z, pts[i]));
  return e;
}

}  // namespace

TEST_CASE("q = 0: the band-limited BIE returns the exponential") {
  const BoundaryMesh mesh = build_sphere_mesh(3);
  const int L = 8;
  const CMatrix Z = CMatrix::Zero(harmonic_count(L), harmonic_count(L));
  for (double zn : {0.1, 1.0, 8.0}) {
    const FrequencyPair p = zeta_frame_origin(zn);
    const BieSolution s = solve_bie_bandlimited(BandLimitedSingleLayer(p.zeta, L), Z, mesh.nodes);
    CHECK(s.ok);
    const CVector e = exp_trace(p.zeta, mesh.nodes);
    CHECK((s.trace - e).norm() / e.norm() <= 1e-8);
    CHECK(s.density.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("q = 0: the nodal BIE in difference form returns the exponential") {
  const BoundaryMesh mesh = build_sphere_mesh(2);
  const HarmonicBasis basis = build_harmonic_basis(mesh, 4);
  const CVec3 z = zeta_frame_origin(1.0).zeta;
  const LayerOperator S = assemble_single_layer(mesh, z);
  const BoundaryOperator l0 = dtn_zero(mesh, basis);
  const BoundaryOperator K = assemble_kzeta(S, l0, l0, mesh, basis);
  const BieSolution s = solve_bie(K, z, mesh);
  const CVector e = exp_trace(z, mesh.nodes);
  CHECK((s.trace - e).norm() / e.norm() <= 1e-12);
}

TEST_CASE("nodal and band-limited solutions agree for a radial phantom") {
  const int L = 6;
  const BoundaryMesh mesh = build_sphere_mesh(3);
  const HarmonicBasis basis = build_harmonic_basis(mesh, L);
  const CMatrix D = radial_delta(L);
  const FrequencyPair p = zeta_frame_origin(1.0);
  const BieSolution bl = solve_bie_bandlimited(BandLimitedSingleLayer(p.zeta, L), D, mesh.nodes);

  const PhantomSpec spec = PhantomSpec::two_layer({1.5, 0.5}, 0.4, 0.1);
  BoundaryOperator lq = radial_dtn_operator(radial_dtn(RadialProfile::from_phantom(spec), L), OperatorKind::DtnQ);
  const BoundaryOperator l0 = dtn_zero(mesh, basis);
  const BoundaryOperator K = assemble_kzeta(assemble_single_layer(mesh, p.zeta), lq, l0, mesh, basis);
  const BieSolution nodal = solve_bie(K, p.zeta, mesh);
  CHECK(nodal.ok);
  CHECK((nodal.trace - bl.trace).norm() / bl.trace.norm() < 2e-2);
}

TEST_CASE("low-frequency law: |f_zeta - 1| ~ |zeta|") {
  const BoundaryMesh mesh = build_sphere_mesh(3);
  const CMatrix D = radial_delta(8);
  std::vector<double> zs = {0.01, 0.02, 0.04, 0.08}, d;
  for (double zn : zs) d.push_back(trace_defect_from_one(D, mesh, zn, 8));
  CHECK(loglog_slope(zs, d) >= 0.9);
}

TEST_CASE("the BIE solution solves the exterior problem") {
  const int L = 8;
  const CMatrix D = radial_delta(L);
  const Vec3 xi(1.0, 0.5, -0.3);
  for (double zn : {5.0, 8.0}) {
    const FrequencyPair p = zeta_frame(xi, frame_magnitude(xi, zn));
    const BandLimitedSingleLayer S(p.zeta, L);
    const BieSolution sol = solve_bie_bandlimited(S, D);
    CHECK(sol.ok);
    CHECK(sol.residual < 1e-10);
    const ExteriorReport r = verify_exterior_equivalence(sol, S);
    CHECK(r.trace_defect < 1e-2);
    CHECK(r.neumann_defect < 1e-3);
    CHECK(r.mean_value_defect < 1e-6);
    CHECK(r.radiation_decreasing);
  }
}

TEST_CASE("condition estimates are finite and the status is reported") {
  const int L = 8;
  const CMatrix D = radial_delta(L);
  for (double zn : {0.5, 5.0, 12.0}) {
    const BieSolution sol = solve_bie_bandlimited(BandLimitedSingleLayer(zeta_frame_origin(zn).zeta, L), D);
    CHECK(std::isfinite(sol.condition));
    CHECK(sol.condition >= 1.0);
    CHECK(sol.condition < kConditionThreshold);
    CHECK(sol.status == "ok");
  }
}

TEST_CASE("mismatched operator sizes are rejected") {
  const CMatrix D = CMatrix::Zero(10, 10);
  CHECK_THROWS_AS(solve_bie_bandlimited(BandLimitedSingleLayer(zeta_frame_origin(1.0).zeta, 4), D), UsageError);
}
