#include <doctest.h>

#include "cgoeit/phantom.hpp"

using namespace cgoeit;

TEST_CASE("quintic smoothstep is C2 at both ends") {
  CHECK(smoothstep5(0.0) == 0.0);
  CHECK(smoothstep5(1.0) == 1.0);
  CHECK(smoothstep5(-1.0) == 0.0);
  CHECK(smoothstep5(2.0) == 1.0);
  CHECK(smoothstep5(0.5) == doctest::Approx(0.5));
  CHECK(smoothstep5_derivative(0.0) == 0.0);
  CHECK(smoothstep5_derivative(1.0) == 0.0);
  const double d = 1e-6;
  for (double t : {0.1, 0.37, 0.8}) {
    CHECK(smoothstep5_derivative(t) ==
          doctest::Approx((smoothstep5(t + d) - smoothstep5(t - d)) / (2 * d)).epsilon(1e-8));
  }
}

TEST_CASE("two-layer phantom has the plateau and the unit shell") {
  const PhantomSpec s = PhantomSpec::two_layer({1.5, 0.5}, 0.4, 0.1);
  s.validate();
  CHECK(s.is_radial());
  CHECK(std::abs(s.radial_value(0.0) - cdouble(1.5, 0.5)) < 1e-15);
  CHECK(std::abs(s.radial_value(0.4) - cdouble(1.5, 0.5)) < 1e-15);
  CHECK(std::abs(s.radial_value(0.5) - 1.0) < 1e-15);
  CHECK(std::abs(s.value(Vec3(0.0, 0.9, 0.0)) - 1.0) < 1e-15);
  CHECK(s.support_radius() <= s.shell_radius);
  CHECK(s.re_lower_bound() >= 1.0);
}

TEST_CASE("radial derivative matches finite differences") {
  const PhantomSpec s = PhantomSpec::two_layer({1.5, 0.5}, 0.4, 0.3);
  const double d = 1e-6;
  for (double r : {0.45, 0.55, 0.65}) {
    const cdouble fd = (s.radial_value(r + d) - s.radial_value(r - d)) / (2 * d);
    CHECK(std::abs(s.radial_derivative(r) - fd) < 1e-6);
  }
}

TEST_CASE("invalid phantoms are rejected") {
  CHECK_THROWS_AS(PhantomSpec::constant(2.0).validate(), UsageError);
  CHECK_THROWS_AS(PhantomSpec::two_layer({-0.5, 0.1}, 0.4, 0.1).validate(), UsageError);
  CHECK_THROWS_AS(PhantomSpec::two_layer({1.5, -0.1}, 0.4, 0.1).validate(), UsageError);
  CHECK_THROWS_AS(PhantomSpec::two_layer({1.5, 0.5}, 0.4, 0.45).validate(), UsageError);
  CHECK_NOTHROW(PhantomSpec::two_layer({1.5, 0.5}, 0.4, 0.44).validate());

  PhantomSpec balls;
  balls.type = PhantomType::SmoothedBalls;
  balls.inclusions = {{Vec3(0.2, 0, 0), 0.1, {1.2, 0.1}}, {Vec3(-0.2, 0, 0), 0.1, {1.2, 0.1}}};
  balls.transition_width = 0.3;
  CHECK_THROWS_AS(balls.validate(), UsageError);
  balls.transition_width = 0.1;
  CHECK_NOTHROW(balls.validate());
  balls.inclusions[0].center = Vec3(0.8, 0, 0);
  CHECK_THROWS_AS(balls.validate(), UsageError);
}

TEST_CASE("constant phantom gives gamma = 1 and q = 0") {
  const VolumeGrid g(20, 0.1);
  const AdmittivityField f = eval_phantom(PhantomSpec::constant(1.0), g);
  CHECK((f.gamma.values.array() - 1.0).abs().maxCoeff() == 0.0);
  const PotentialField q = schrodinger_potential(f);
  CHECK(q.q.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sampled phantom matches the analytic profile pointwise") {
  const PhantomSpec s = PhantomSpec::bump({0.05, 0.02}, 0.6);
  const VolumeGrid g(17, 0.1);
  const AdmittivityField f = eval_phantom(s, g);
  for (std::size_t i = 0; i < g.size(); i += 97) {
    CHECK(std::abs(f.gamma.values(static_cast<Eigen::Index>(i)) - s.value(g.point(i))) < 1e-15);
  }
  CHECK(f.re_lower_bound >= 1.0);
}

TEST_CASE("Schrodinger potential of a smooth radial profile matches the analytic formula") {
  // q = Lap(sqrt gamma)/sqrt gamma = (s'' + 2 s'/r)/s for s = sqrt(gamma(r)).
  const PhantomSpec spec = PhantomSpec::bump({0.3, 0.1}, 0.7);
  const VolumeGrid g(49, 0.1);
  const PotentialField q = schrodinger_potential(eval_phantom(spec, g));
  const double d = 1e-4;
  auto s = [&](double r) { return std::sqrt(spec.radial_value(r)); };
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const Vec3 x = g.point(i, g.n / 2, g.n / 2);
    const double r = x.norm();
    if (r < 0.1 || r > 0.9) continue;
    const cdouble s2 = (s(r + d) - 2.0 * s(r) + s(r - d)) / (d * d);
    const cdouble s1 = (s(r + d) - s(r - d)) / (2 * d);
    const cdouble exact = (s2 + 2.0 * s1 / r) / s(r);
    worst = std::max(worst, std::abs(q.q(i, g.n / 2, g.n / 2) - exact));
    scale = std::max(scale, std::abs(exact));
  }
  CHECK(worst / scale < 0.05);
}

TEST_CASE("sqrt field is the principal root") {
  const VolumeGrid g(16, 0.0);
  VolumeField f(g);
  f.values.setConstant(cdouble(-1.0, 1e-12));
  CHECK(sqrt_field(f).values(0).real() >= 0.0);
}
