#include <doctest.h>

#include "cgoeit/diagnostics.hpp"
#include "cgoeit/layer_potentials.hpp"
#include "cgoeit/scattering.hpp"

using namespace cgoeit;

TEST_CASE("classical single layer: constant density and spectrum") {
  const BoundaryMesh mesh = build_sphere_mesh(3);
  const HarmonicBasis basis = build_harmonic_basis(mesh, 6);
  const CMatrix S0 = single_layer_classical(mesh);
  const CVector one = CVector::Ones(static_cast<Eigen::Index>(mesh.size()));
  CHECK((S0 * one - one).cwiseAbs().maxCoeff() < 1e-12);
  for (int b = 0; b < basis.size(); ++b) {
    const CVector y = basis.values.col(b).cast<cdouble>();
    const double l = harmonic_degree(b);
    CHECK((S0 * y - y / (2 * l + 1)).norm() / y.norm() * (2 * l + 1) < 2e-2);
  }
}

TEST_CASE("zeta = 0 double layer and its adjoint on constants") {
  const BoundaryMesh mesh = build_sphere_mesh(2);
  const CVector one = CVector::Ones(static_cast<Eigen::Index>(mesh.size()));
  const LayerOperator B = assemble_double_layer_trace(mesh, CVec3::Zero());
  const LayerOperator Bd = assemble_bdagger(mesh, CVec3::Zero());
  CHECK((B.matrix * one + 0.5 * one).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((Bd.matrix * one + 0.5 * one).cwiseAbs().maxCoeff() < 1e-12);
  // Interior trace of D_0 1 is -1/2 + B_0 1 = -1.
  CHECK(((-0.5 * one + B.matrix * one) + one).cwiseAbs().maxCoeff() < 1e-12);
  // Exterior normal derivative of 1/|x| is -1 = -1/2 + B_0^dagger 1.
  CHECK(((-0.5 * one + Bd.matrix * one) + one).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("S_zeta - S_0 is exactly the smooth part") {
  const BoundaryMesh mesh = build_sphere_mesh(2);
  const CVec3 z = zeta_frame_origin(3.0).zeta;
  const LayerOperator S = assemble_single_layer(mesh, z);
  const LayerOperator S0 = assemble_single_layer(mesh, CVec3::Zero());
  const LayerOperator H = assemble_hcal(mesh, z);
  CHECK(H.kind == LayerKind::Hcal);
  CHECK((S.matrix - S0.matrix - H.matrix).cwiseAbs().maxCoeff() <= 1e-14 * H.matrix.cwiseAbs().maxCoeff());
  CHECK(H.matrix.allFinite());
}

TEST_CASE("norm of the smooth part grows like |zeta|") {
  const BoundaryMesh mesh = build_sphere_mesh(2);
  std::vector<double> zs = {0.02, 0.04, 0.08}, n;
  for (double zn : zs) n.push_back(hcal_norm(mesh, zeta_frame_origin(zn).zeta));
  CHECK(loglog_slope(zs, n) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("B^dagger_zeta tends to B^dagger_0 as zeta -> 0") {
  const BoundaryMesh mesh = build_sphere_mesh(2);
  const CMatrix B0 = assemble_bdagger(mesh, CVec3::Zero()).matrix;
  double prev = std::numeric_limits<double>::infinity();
  for (double zn : {0.4, 0.2, 0.1, 0.05}) {
    const double d = (assemble_bdagger(mesh, zeta_frame_origin(zn).zeta).matrix - B0).norm();
    CHECK(d < prev);
    CHECK(d <= 2.0 * zn);
    prev = d;
  }
}

TEST_CASE("jump relations hold and improve under refinement") {
  for (double zn : {0.0, 1.0}) {
    const CVec3 z = zn == 0.0 ? CVec3::Zero() : zeta_frame_origin(zn).zeta;
    const JumpDefects coarse = jump_defects(build_sphere_mesh(2), z, 5, 11);
    const JumpDefects fine = jump_defects(build_sphere_mesh(3), z, 5, 11);
    CHECK(fine.max() <= 3e-2);
    CHECK(fine.max() < coarse.max());
  }
}

TEST_CASE("Green identity B_zeta = -I/2 + S_zeta Lambda_0 on band-limited data") {
  const BoundaryMesh mesh = build_sphere_mesh(3);
  const HarmonicBasis basis = build_harmonic_basis(mesh, 6);
  const CVec3 z = zeta_frame_origin(1.0).zeta;
  const CMatrix S = assemble_single_layer(mesh, z).matrix;
  const CMatrix B = assemble_double_layer_trace(mesh, z).matrix;
  const BoundaryOperator l0 = to_nodal(dtn_zero(mesh, basis), basis, mesh);
  const CMatrix Y = basis.values.cast<cdouble>();
  const CMatrix lhs = B * Y;
  const CMatrix rhs = -0.5 * Y + S * l0.matrix * Y;
  CHECK((lhs - rhs).norm() / Y.norm() < 3e-2);
}

TEST_CASE("band-limited single layer at zeta = 0 is diagonal") {
  const BandLimitedSingleLayer S(CVec3::Zero(), 6);
  const CMatrix& G = S.galerkin();
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j) {
      const double expect = i == j ? 1.0 / (2 * harmonic_degree(static_cast<int>(i)) + 1) : 0.0;
      CHECK(std::abs(G(i, j) - expect) < 1e-12);
    }
}

TEST_CASE("band-limited and nodal single layers agree") {
  const BoundaryMesh mesh = build_sphere_mesh(3);
  const HarmonicBasis basis = build_harmonic_basis(mesh, 5);
  const CVec3 z = zeta_frame_origin(2.0).zeta;
  const BandLimitedSingleLayer bl(z, 5);
  const CMatrix nodal = assemble_single_layer(mesh, z).matrix * basis.values.cast<cdouble>();
  const CMatrix direct = bl.evaluate(mesh.nodes);
  CHECK((nodal - direct).norm() / direct.norm() < 2e-2);
}

TEST_CASE("scaled evaluation agrees with plain evaluation") {
  const CVec3 z = zeta_frame_origin(3.0).zeta;
  const BandLimitedSingleLayer bl(z, 4);
  const std::vector<Vec3> pts = {Vec3(1.5, 0.2, 0.1), Vec3(-0.3, 2.0, 0.4)};
  const CMatrix a = bl.evaluate(pts), b = bl.evaluate_scaled(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const cdouble e = std::exp(-kI * bdot(z, pts[i]));
    CHECK((a.row(static_cast<Eigen::Index>(i)) * e - b.row(static_cast<Eigen::Index>(i))).norm() <= 1e-6 * b.row(static_cast<Eigen::Index>(i)).norm());
  }
}

TEST_CASE("exterior field evaluation") {
  const BoundaryMesh mesh = build_sphere_mesh(3);
  const auto n = static_cast<Eigen::Index>(mesh.size());
  const std::vector<Vec3> pts = {Vec3(2, 0, 0), Vec3(0, -2, 0), Vec3(1.2, 1.2, 0.5)};

  SUBCASE("zero densities leave the exponential") {
    const CVec3 z = zeta_frame_origin(2.0).zeta;
    const CVector v = eval_exterior_field(mesh, z, CVector::Zero(n), CVector::Zero(n), pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(std::abs(v(static_cast<Eigen::Index>(i)) - std::exp(kI * bdot(z, pts[i]))) < 1e-14);
    }
  }
  SUBCASE("uniform single layer is 1/|x| outside") {
    // psi = 1 - S_0 f_S with f_S = 1 gives 1 - 1/|x|.
    const CVector v = eval_exterior_field(mesh, CVec3::Zero(), CVector::Ones(n), CVector::Zero(n), pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(std::abs(v(static_cast<Eigen::Index>(i)) - (1.0 - 1.0 / pts[i].norm())) < 1e-3);
    }
  }
  SUBCASE("targets too close to the sphere are rejected") {
    CHECK_THROWS_AS(eval_exterior_field(mesh, CVec3::Zero(), CVector::Ones(n), CVector::Zero(n), {Vec3(1.01, 0, 0)}),
                    UsageError);
  }
}
