#include <doctest.h>

#include "cgoeit/inversion.hpp"

using namespace cgoeit;

namespace {

std::vector<ScatteringSample> exact_samples(const XiGrid& g, const std::function<cdouble(const Vec3&)>& f) {
  std::vector<ScatteringSample> s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    s[i].pair.xi = g.points[i];
    s[i].t = f(g.points[i]);
  }
  return s;
}

}  // namespace

TEST_CASE("xi grid is symmetric and contains the origin") {
  const XiGrid g = build_xi_grid(8.0, default_xi_spacing(0.1));
  CHECK(g.size() == g.index.size());
  REQUIRE(g.find({0, 0, 0}) >= 0);
  CHECK(g.points[static_cast<std::size_t>(g.find({0, 0, 0}))].norm() == 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.points[i].norm() <= 8.0 + 1e-12);
    const auto& j = g.index[i];
    CHECK(g.find({-j[0], -j[1], -j[2]}) >= 0);
  }
  CHECK(g.find({100, 0, 0}) == -1);
  CHECK_THROWS_AS(build_xi_grid(8.0, 0.0), UsageError);
}

TEST_CASE("Hann taper") {
  CHECK(hann_taper(0.0, 8.0) == 1.0);
  CHECK(hann_taper(6.0, 8.0) == 1.0);
  CHECK(hann_taper(7.0, 8.0) == doctest::Approx(0.5));
  CHECK(hann_taper(8.0, 8.0) == doctest::Approx(0.0));
  CHECK(hann_taper(9.0, 8.0) == 0.0);
}

TEST_CASE("inverse transform of an exact Gaussian spectrum") {
  const double sigma = 0.25;
  const XiGrid g = build_xi_grid(16.0, default_xi_spacing(0.1));
  const double c = std::pow(2 * kPi * sigma * sigma, 1.5);
  const SpectralField sp = qhat_from_samples(
      exact_samples(g, [&](const Vec3& xi) { return cdouble(c * std::exp(-0.5 * sigma * sigma * xi.squaredNorm())); }), g);
  CHECK(sp.gaps_filled == 0);
  const VolumeGrid vg(24, 0.1);
  const PotentialField q = inverse_fourier(sp, vg);
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < vg.size(); ++i) {
    const Vec3 x = vg.point(i);
    const cdouble v = q.q.values(static_cast<Eigen::Index>(i));
    if (x.norm() > 1.0) {
      CHECK(v == 0.0);
      continue;
    }
    const double exact = std::exp(-x.squaredNorm() / (2 * sigma * sigma));
    err += std::norm(v - exact);
    ref += exact * exact;
  }
  CHECK(std::sqrt(err / ref) < 2e-2);
}

TEST_CASE("an isolated failed sample is filled from its neighbours") {
  const XiGrid g = build_xi_grid(6.0, 1.0);
  auto s = exact_samples(g, [](const Vec3& xi) { return cdouble(1.0 + xi(0), 0.5); });
  const auto k = static_cast<std::size_t>(g.find({1, 0, 0}));
  s[k].t.reset();
  s[k].status = "possible exceptional point";
  const SpectralField sp = qhat_from_samples(s, g);
  CHECK(sp.gaps_filled == 1);
  // Mean of the six neighbours of a linear function is its value.
  CHECK(std::abs(sp.qhat(static_cast<Eigen::Index>(k)) - cdouble(2.0, 0.5)) < 1e-12);
}

TEST_CASE("adjacent failures abort the sweep") {
  const XiGrid g = build_xi_grid(6.0, 1.0);
  auto s = exact_samples(g, [](const Vec3&) { return cdouble(1.0); });
  const auto a = static_cast<std::size_t>(g.find({1, 0, 0}));
  const auto b = static_cast<std::size_t>(g.find({2, 0, 0}));
  s[a].t.reset();
  s[b].t.reset();
  try {
    qhat_from_samples(s, g);
    FAIL("expected SweepAbort");
  } catch (const SweepAbort& e) {
    CHECK(e.failed().size() == 2);
  }
  CHECK_THROWS_AS(qhat_from_samples(std::vector<ScatteringSample>(3), g), UsageError);
}

TEST_CASE("q = 0 gives gamma = 1") {
  PotentialField q;
  q.q = VolumeField(VolumeGrid(24, 0.1));
  const VolumeField g = gamma_from_q(q);
  CHECK((g.values.array() - 1.0).abs().maxCoeff() < 1e-7);
}

TEST_CASE("gamma is recovered from its own potential") {
  const PhantomSpec spec = PhantomSpec::bump({0.4, 0.2}, 0.6);
  const AdmittivityField f = eval_phantom(spec, VolumeGrid(32, 0.1));
  const VolumeField g = gamma_from_q(schrodinger_potential(f));
  const ErrorMetrics m = error_metrics(g, f.gamma);
  CHECK(m.rel_l2_re < 1e-2);
  CHECK(m.rel_l2_im < 5e-2);
}

TEST_CASE("error metrics of identical fields") {
  const AdmittivityField f = eval_phantom(PhantomSpec::bump({0.1, 0.3}, 0.4, Vec3(0.2, -0.1, 0.0)), VolumeGrid(24, 0.1));
  const ErrorMetrics m = error_metrics(f.gamma, f.gamma);
  CHECK(m.rel_l2_re == 0.0);
  CHECK(m.rel_l2_im == 0.0);
  CHECK(m.max_err_re == 0.0);
  CHECK((m.im_center_true - Vec3(0.2, -0.1, 0.0)).norm() < f.grid().spacing());
  CHECK(m.im_peak_distance < f.grid().spacing());
  CHECK_THROWS_AS(error_metrics(f.gamma, VolumeField(VolumeGrid(20, 0.1))), UsageError);
}
