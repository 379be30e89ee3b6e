#include <doctest.h>

#include "cgoeit/lippmann_schwinger.hpp"
#include "cgoeit/scattering.hpp"

using namespace cgoeit;

namespace {

PotentialField small_potential(int n) {
  return schrodinger_potential(eval_phantom(PhantomSpec::bump({0.05, 0.02}, 0.6), VolumeGrid(n, 0.1)));
}

CVec3 frame_zeta(double zn) {
  const Vec3 xi(1.0, 0.0, 0.0);
  return zeta_frame(xi, frame_magnitude(xi, zn)).zeta;
}

}  // namespace

TEST_CASE("GMRES solves a small dense system") {
  CMatrix A(3, 3);
  A << 0.2, 0.1, 0.0, -0.1, 0.3, 0.05, 0.0, 0.2, -0.1;
  const CVector b = CVector::Ones(3);
  const KrylovResult r = solve_identity_plus([&](const CVector& x) { return CVector(A * x); }, b, {});
  CHECK(r.converged);
  const CMatrix I = CMatrix::Identity(3, 3);
  CHECK(((I + A) * r.x - b).norm() < 1e-8);
}

TEST_CASE("q = 0 gives the plain exponential") {
  const VolumeGrid g(20, 0.1);
  PotentialField q;
  q.q = VolumeField(g);
  const CVec3 z = frame_zeta(5.0);
  const LsSolution s = lippmann_schwinger_solve(q, faddeev_gzeta(g, ComplexFrequency(z)));
  CHECK(s.converged);
  CHECK(s.phi.values.cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < g.size(); i += 131) {
    const cdouble e = std::exp(kI * bdot(z, g.point(i)));
    CHECK(std::abs(s.psi.values(static_cast<Eigen::Index>(i)) - e) <= 1e-14 * std::abs(e));
  }
  const MuSolution mu = mu_solve(q, faddeev_gzeta(g, ComplexFrequency(z)));
  CHECK(mu.mu.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("one Born step is -g * q") {
  const PotentialField q = small_potential(24);
  const FaddeevKernel k = faddeev_gzeta(q.grid(), ComplexFrequency(frame_zeta(5.0)));
  KrylovOptions o;
  o.born = true;
  o.max_iterations = 1;
  const LsSolution s = lippmann_schwinger_solve(q, k, o);
  const VolumeField ref = convolve_gzeta(k, q.q);
  CHECK((s.phi.values + ref.values).norm() <= 1e-12 * ref.values.norm());
}

TEST_CASE("Born iteration and GMRES agree for small contrast") {
  const PotentialField q = small_potential(24);
  const FaddeevKernel k = faddeev_gzeta(q.grid(), ComplexFrequency(frame_zeta(8.0)));
  KrylovOptions born;
  born.born = true;
  const LsSolution a = lippmann_schwinger_solve(q, k, born);
  const LsSolution b = lippmann_schwinger_solve(q, k);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK((a.phi.values - b.phi.values).norm() <= 1e-6 * b.phi.values.norm());
  CHECK(b.residual <= 1e-8);
  CHECK(b.history.size() >= 1);
}

TEST_CASE("mu agrees with psi and gives the same scattering integral") {
  const PotentialField q = small_potential(24);
  const FaddeevKernel k = faddeev_gzeta(q.grid(), ComplexFrequency(frame_zeta(6.0)));
  const LsSolution ls = lippmann_schwinger_solve(q, k);
  const MuSolution mu = mu_solve(q, k);
  CHECK(mu.converged);
  const VolumeGrid& g = q.grid();
  const Vec3 xi(1.0, 0.0, 0.0);
  cdouble t_psi = 0.0, t_mu = 0.0;
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    const cdouble qv = q.q.values(e);
    const cdouble ref = std::abs(qv) * (1.0 + ls.phi.values(e));
    worst = std::max(worst, std::abs(mu.mu.values(e) - ref));
    scale = std::max(scale, std::abs(ref));
    const cdouble w = std::exp(-kI * xi.dot(g.point(i)));
    t_psi += w * qv * (1.0 + ls.phi.values(e));
    t_mu += w * mu.qtilde.values(e) * mu.mu.values(e);
  }
  CHECK(worst <= 1e-6 * scale);
  CHECK(std::abs(t_psi - t_mu) <= 1e-6 * std::abs(t_psi));
}

TEST_CASE("phi decays like 1/|zeta|") {
  const PotentialField q = small_potential(32);
  std::vector<double> norms;
  for (double zn : {4.0, 8.0, 16.0}) {
    const LsSolution s = lippmann_schwinger_solve(q, faddeev_gzeta(q.grid(), ComplexFrequency(frame_zeta(zn))));
    REQUIRE(s.converged);
    norms.push_back(weighted_norm(s.phi));
  }
  for (int i = 0; i < 2; ++i) {
    const double ratio = norms[i] / norms[i + 1];
    CHECK(ratio >= 2.0 / 1.6);
    CHECK(ratio <= 2.0 * 1.6);
  }
}

TEST_CASE("weighted norm of a constant on the box") {
  const VolumeGrid g(16, 0.0);
  VolumeField one(g);
  one.values.setOnes();
  const double plain = std::sqrt(g.cell_volume() * g.size());
  CHECK(weighted_norm(one, 1.0) == doctest::Approx(plain));
  CHECK(weighted_norm(one) < plain);
}
