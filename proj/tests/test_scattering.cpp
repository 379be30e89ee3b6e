#include <doctest.h>

#include <random>

#include "cgoeit/scattering.hpp"

using namespace cgoeit;

namespace {

struct RadialData {
  BoundaryOperator lambda_gamma, lambda_0;
};

RadialData radial_data(const PhantomSpec& spec, int L) {
  RadialData d;
  d.lambda_gamma = radial_dtn_operator(radial_dtn(RadialProfile::from_phantom(spec), L), OperatorKind::DtnGamma);
  d.lambda_0 = radial_dtn_operator(radial_dtn(RadialProfile::constant(1.0), L), OperatorKind::DtnZero);
  return d;
}

}  // namespace

TEST_CASE("frames satisfy zeta.zeta = 0 and xi^2 + 2 zeta.xi = 0") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int t = 0; t < 50; ++t) {
    const Vec3 xi(u(rng), u(rng), u(rng));
    for (int seed : {0, 1, 2}) {
      const FrequencyPair p = zeta_frame(xi, std::abs(u(rng)), seed);
      CHECK(p.nullity_defect() <= 1e-12);
      CHECK(p.membership_defect() <= 1e-12);
      CHECK(std::abs(p.e2.dot(xi)) <= 1e-12 * (1 + xi.norm()));
      CHECK(std::abs(p.e3.dot(xi)) <= 1e-12 * (1 + xi.norm()));
      CHECK(std::abs(p.e2.dot(p.e3)) <= 1e-12);
    }
  }
}

TEST_CASE("frame seeds rotate the frame about xi") {
  const Vec3 xi(1.0, 2.0, 0.5);
  const FrequencyPair a = zeta_frame(xi, 3.0, 0), b = zeta_frame(xi, 3.0, 1);
  CHECK(a.e2.dot(b.e2) == doctest::Approx(std::cos(kPi / 3)));
  CHECK(a.zeta.norm() == doctest::Approx(b.zeta.norm()));
}

TEST_CASE("frame magnitude hits the requested |zeta|") {
  const Vec3 xi(2.0, -1.0, 3.0);
  for (double zn : {5.0, 10.0, 20.0}) {
    const FrequencyPair p = zeta_frame(xi, frame_magnitude(xi, zn));
    CHECK(p.zeta.norm() == doctest::Approx(zn).epsilon(1e-12));
  }
  CHECK(frame_magnitude(xi, 0.1) == 0.0);
}

TEST_CASE("origin frame") {
  const FrequencyPair p = zeta_frame_origin(4.0);
  CHECK(p.xi.norm() == 0.0);
  CHECK(p.zeta.norm() == doctest::Approx(4.0));
  CHECK(p.nullity_defect() <= 1e-14);
}

TEST_CASE("sweep policy and method names") {
  SweepPolicy p;
  CHECK(p.zeta_norm(Vec3(1, 0, 0)) == 5.0);
  CHECK(p.zeta_norm(Vec3(6, 8, 0)) == 10.0);
  p.kappa = 2.0;
  CHECK(p.zeta_norm(Vec3(3, 0, 0)) == 6.0);
  for (auto m : {ScatterMethod::Boundary, ScatterMethod::Volume, ScatterMethod::Texp}) {
    CHECK(scatter_method_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(scatter_method_from_string("born"), UsageError);
}

TEST_CASE("q = 0 gives t = 0 on every route") {
  const RadialData d = radial_data(PhantomSpec::constant(1.0), 8);
  const Vec3 xi(1.0, 2.0, 0.0);
  const FrequencyPair p = zeta_frame(xi, frame_magnitude(xi, 6.0));
  const ScatteringSample b = scattering_transform_boundary(d.lambda_gamma, d.lambda_0, p);
  const ScatteringSample e = scattering_transform_texp(d.lambda_gamma, d.lambda_0, p);
  REQUIRE(b.ok());
  REQUIRE(e.ok());
  CHECK(std::abs(*b.t) < 1e-12);
  CHECK(std::abs(*e.t) < 1e-12);

  PotentialField q;
  q.q = VolumeField(VolumeGrid(20, 0.1));
  const ScatteringSample v = scattering_transform_volume(q, p);
  REQUIRE(v.ok());
  CHECK(std::abs(*v.t) == 0.0);
}

TEST_CASE("t^exp is close to t for small contrast") {
  const RadialData d = radial_data(PhantomSpec::bump({0.05, 0.02}, 0.6), 16);
  double worst = 0.0, scale = 0.0;
  for (const Vec3& xi : {Vec3(1, 0, 0), Vec3(0, 2, 1), Vec3(2, -2, 1), Vec3(0, 0, 4)}) {
    const FrequencyPair p = zeta_frame(xi, frame_magnitude(xi, 10.0));
    const ScatteringSample b = scattering_transform_boundary(d.lambda_gamma, d.lambda_0, p);
    const ScatteringSample e = scattering_transform_texp(d.lambda_gamma, d.lambda_0, p);
    REQUIRE(b.ok());
    worst = std::max(worst, std::abs(*b.t - *e.t));
    scale = std::max(scale, std::abs(*b.t));
  }
  CHECK(worst <= 0.1 * scale);
}

TEST_CASE("boundary and volume routes agree for a small radial bump") {
  const PhantomSpec spec = PhantomSpec::bump({0.05, 0.02}, 0.6);
  const RadialData d = radial_data(spec, 12);
  const PotentialField q = schrodinger_potential(eval_phantom(spec, VolumeGrid(40, 0.1)));
  const Vec3 xi(1.5, 0.5, 0.0);
  const FrequencyPair p = zeta_frame(xi, frame_magnitude(xi, 5.0));
  const ScatteringSample b = scattering_transform_boundary(d.lambda_gamma, d.lambda_0, p);
  const ScatteringSample v = scattering_transform_volume(q, p);
  REQUIRE(b.ok());
  REQUIRE(v.ok());
  CHECK(std::abs(*b.t - *v.t) <= 0.05 * std::abs(*v.t));
  // Both approach q^ for small contrast.
  const cdouble qh = fourier_volume(q, xi);
  CHECK(std::abs(*v.t - qh) <= 0.2 * std::abs(qh));
}

TEST_CASE("sweeps keep the order of xi and tag the method") {
  const RadialData d = radial_data(PhantomSpec::bump({0.05, 0.02}, 0.6), 8);
  const std::vector<Vec3> xis = {Vec3::Zero(), Vec3(1, 0, 0), Vec3(0, 3, 0)};
  SweepPolicy pol;
  pol.method = ScatterMethod::Texp;
  const auto s = scattering_sweep(d.lambda_gamma, d.lambda_0, xis, pol);
  REQUIRE(s.size() == xis.size());
  for (std::size_t i = 0; i < xis.size(); ++i) {
    CHECK((s[i].pair.xi - xis[i]).norm() == 0.0);
    CHECK(s[i].method == ScatterMethod::Texp);
    CHECK(s[i].ok());
    CHECK(s[i].pair.zeta.norm() == doctest::Approx(pol.zeta_norm(xis[i])));
  }
  pol.method = ScatterMethod::Volume;
  CHECK_THROWS_AS(scattering_sweep(d.lambda_gamma, d.lambda_0, xis, pol), UsageError);
}

TEST_CASE("nodal operators are rejected by the boundary route") {
  const BoundaryMesh mesh = build_sphere_mesh(2);
  const HarmonicBasis basis = build_harmonic_basis(mesh, 4);
  const BoundaryOperator l0 = dtn_zero(mesh, basis);
  const BoundaryOperator nodal = to_nodal(l0, basis, mesh);
  CHECK_THROWS_AS(scattering_transform_boundary(nodal, l0, zeta_frame_origin(5.0)), UsageError);
}

TEST_CASE("Fourier transform of the potential by quadrature") {
  // Reference: plain sum over all grid nodes.
  const PotentialField q = schrodinger_potential(eval_phantom(PhantomSpec::bump({0.2, 0.1}, 0.5), VolumeGrid(24, 0.1)));
  const Vec3 xi(0.7, 0.0, 0.0);
  cdouble ref = 0.0;
  for (std::size_t i = 0; i < q.grid().size(); ++i) {
    ref += std::exp(-kI * xi.dot(q.grid().point(i))) * q.q.values(static_cast<Eigen::Index>(i));
  }
  ref *= q.grid().cell_volume();
  CHECK(std::abs(fourier_volume(q, xi) - ref) <= 1e-12 * std::abs(ref));
}
