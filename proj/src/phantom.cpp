#include "cgoeit/phantom.hpp"

#include <algorithm>
#include <cmath>

namespace cgoeit {

double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double smoothstep5_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (t - 1.0) * (t - 1.0);
}

namespace {

void check_value(cdouble v, const std::string& what) {
  if (!(v.real() > 0.0)) throw UsageError(what + ": Re gamma must be > 0");
  if (v.imag() < 0.0) throw UsageError(what + ": Im gamma must be >= 0");
}

}  // namespace

bool PhantomSpec::is_radial() const {
  if (type == PhantomType::Constant || type == PhantomType::RadialMultilayer) return true;
  return inclusions.size() == 1 && inclusions[0].center.norm() == 0.0;
}

void PhantomSpec::validate() const {
  if (!(shell_radius > 0.0 && shell_radius < 1.0)) {
    throw UsageError("shell radius must lie in (0, 1)");
  }
  if (!(transition_width > 0.0)) throw UsageError("transition width must be > 0");
  if (!(omega > 0.0)) throw UsageError("omega must be > 0");
  switch (type) {
    case PhantomType::Constant:
      check_value(constant_value, "constant phantom");
      if (constant_value != cdouble(1.0)) {
        throw UsageError("constant phantom must equal 1 so that gamma = 1 near the boundary");
      }
      break;
    case PhantomType::RadialMultilayer: {
      if (layer_radii.empty() || layer_radii.size() != layer_values.size()) {
        throw UsageError("multilayer phantom needs matching radii and values");
      }
      for (std::size_t k = 0; k < layer_radii.size(); ++k) {
        check_value(layer_values[k], "layer " + std::to_string(k));
        if (layer_radii[k] < 0.0 || (k > 0 && layer_radii[k] < layer_radii[k - 1] + transition_width)) {
          throw UsageError("layer radii must ascend with at least one transition width between steps");
        }
      }
      if (layer_radii.back() + transition_width > shell_radius) {
        throw UsageError("outermost layer overlaps the gamma = 1 shell");
      }
      break;
    }
    case PhantomType::SmoothedBalls: {
      if (inclusions.empty()) throw UsageError("smoothed-ball phantom needs inclusions");
      for (std::size_t k = 0; k < inclusions.size(); ++k) {
        const auto& inc = inclusions[k];
        check_value(inc.value, "inclusion " + std::to_string(k));
        if (inc.radius < 0.0) throw UsageError("inclusion radius must be >= 0");
        if (inc.center.norm() + inc.radius + transition_width > shell_radius) {
          throw UsageError("inclusion " + std::to_string(k) + " overlaps the gamma = 1 shell");
        }
        for (std::size_t j = 0; j < k; ++j) {
          const auto& o = inclusions[j];
          if ((inc.center - o.center).norm() <
              inc.radius + o.radius + 2.0 * transition_width) {
            throw UsageError("inclusions " + std::to_string(j) + " and " + std::to_string(k) +
                             " overlap");
          }
        }
      }
      break;
    }
  }
}

double PhantomSpec::re_lower_bound() const {
  double c = 1.0;
  switch (type) {
    case PhantomType::Constant:
      c = constant_value.real();
      break;
    case PhantomType::RadialMultilayer:
      for (auto v : layer_values) c = std::min(c, v.real());
      break;
    case PhantomType::SmoothedBalls:
      for (const auto& inc : inclusions) c = std::min(c, inc.value.real());
      break;
  }
  return c;
}

cdouble PhantomSpec::radial_value(double r) const {
  switch (type) {
    case PhantomType::Constant:
      return constant_value;
    case PhantomType::RadialMultilayer: {
      cdouble g = 1.0;
      for (std::size_t k = 0; k < layer_radii.size(); ++k) {
        const cdouble outer = (k + 1 < layer_values.size()) ? layer_values[k + 1] : cdouble(1.0);
        g += (layer_values[k] - outer) * (1.0 - smoothstep5((r - layer_radii[k]) / transition_width));
      }
      return g;
    }
    case PhantomType::SmoothedBalls: {
      const auto& inc = inclusions.at(0);
      return 1.0 + (inc.value - 1.0) *
                       (1.0 - smoothstep5((r - inc.radius) / transition_width));
    }
  }
  return 1.0;
}

cdouble PhantomSpec::radial_derivative(double r) const {
  switch (type) {
    case PhantomType::Constant:
      return 0.0;
    case PhantomType::RadialMultilayer: {
      cdouble d = 0.0;
      for (std::size_t k = 0; k < layer_radii.size(); ++k) {
        const cdouble outer = (k + 1 < layer_values.size()) ? layer_values[k + 1] : cdouble(1.0);
        d -= (layer_values[k] - outer) *
             smoothstep5_derivative((r - layer_radii[k]) / transition_width) / transition_width;
      }
      return d;
    }
    case PhantomType::SmoothedBalls: {
      const auto& inc = inclusions.at(0);
      return -(inc.value - 1.0) *
             smoothstep5_derivative((r - inc.radius) / transition_width) / transition_width;
    }
  }
  return 0.0;
}

cdouble PhantomSpec::value(const Vec3& x) const {
  if (type != PhantomType::SmoothedBalls) return radial_value(x.norm());
  cdouble g = 1.0;
  for (const auto& inc : inclusions) {
    const double d = (x - inc.center).norm();
    g += (inc.value - 1.0) * (1.0 - smoothstep5((d - inc.radius) / transition_width));
  }
  return g;
}

double PhantomSpec::support_radius() const {
  switch (type) {
    case PhantomType::Constant:
      return 0.0;
    case PhantomType::RadialMultilayer:
      return layer_radii.empty() ? 0.0 : layer_radii.back() + transition_width;
    case PhantomType::SmoothedBalls: {
      double r = 0.0;
      for (const auto& inc : inclusions) {
        r = std::max(r, inc.center.norm() + inc.radius + transition_width);
      }
      return r;
    }
  }
  return 0.0;
}

PhantomSpec PhantomSpec::constant(cdouble value) {
  PhantomSpec s;
  s.type = PhantomType::Constant;
  s.constant_value = value;
  return s;
}

PhantomSpec PhantomSpec::two_layer(cdouble inner, double radius, double width) {
  PhantomSpec s;
  s.type = PhantomType::RadialMultilayer;
  s.layer_radii = {radius};
  s.layer_values = {inner};
  s.transition_width = width;
  return s;
}

PhantomSpec PhantomSpec::bump(cdouble contrast, double radius, const Vec3& center) {
  PhantomSpec s;
  s.type = PhantomType::SmoothedBalls;
  s.inclusions = {Inclusion{center, 0.0, 1.0 + contrast}};
  s.transition_width = radius;
  return s;
}

double max_second_difference(const VolumeField& f) {
  const auto& g = f.grid;
  const double h2 = g.spacing() * g.spacing();
  double best = 0.0;
  for (int k = 1; k < g.n - 1; ++k)
    for (int j = 1; j < g.n - 1; ++j)
      for (int i = 1; i < g.n - 1; ++i) {
        const cdouble c = 2.0 * f(i, j, k);
        best = std::max({best, std::abs(f(i + 1, j, k) - c + f(i - 1, j, k)) / h2,
                         std::abs(f(i, j + 1, k) - c + f(i, j - 1, k)) / h2,
                         std::abs(f(i, j, k + 1) - c + f(i, j, k - 1)) / h2});
      }
  return best;
}

AdmittivityField AdmittivityField::from_function(const VolumeGrid& grid,
                                                 const std::function<cdouble(const Vec3&)>& f,
                                                 double boundary_margin) {
  AdmittivityField field;
  field.gamma = VolumeField(grid, f);
  field.boundary_margin = boundary_margin;
  field.re_lower_bound = field.gamma.values.real().minCoeff();
  field.max_second_difference = cgoeit::max_second_difference(field.gamma);
  return field;
}

AdmittivityField eval_phantom(const PhantomSpec& spec, const VolumeGrid& grid) {
  spec.validate();
  AdmittivityField field;
  field.gamma = VolumeField(grid, [&](const Vec3& x) { return spec.value(x); });
  field.omega = spec.omega;
  field.boundary_margin = spec.shell_radius;
  field.re_lower_bound = spec.re_lower_bound();
  field.max_second_difference = cgoeit::max_second_difference(field.gamma);
  return field;
}

VolumeField sqrt_field(const VolumeField& gamma) {
  VolumeField out(gamma.grid);
  out.values = gamma.values.unaryExpr([](cdouble v) { return std::sqrt(v); });
  return out;
}

VolumeField discrete_laplacian(const VolumeField& f) {
  const auto& g = f.grid;
  const double h2 = g.spacing() * g.spacing();
  VolumeField out(g);
  for (int k = 1; k < g.n - 1; ++k)
    for (int j = 1; j < g.n - 1; ++j)
      for (int i = 1; i < g.n - 1; ++i) {
        out(i, j, k) = (f(i + 1, j, k) + f(i - 1, j, k) + f(i, j + 1, k) + f(i, j - 1, k) +
                        f(i, j, k + 1) + f(i, j, k - 1) - 6.0 * f(i, j, k)) /
                       h2;
      }
  return out;
}

PotentialField schrodinger_potential(const AdmittivityField& field) {
  const VolumeField root = sqrt_field(field.gamma);
  const VolumeField lap = discrete_laplacian(root);
  PotentialField pot;
  pot.q = VolumeField(field.grid());
  pot.support_radius = field.boundary_margin;
  const auto& g = field.grid();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.point(idx).norm() < 1.0) pot.q.values(idx) = lap.values(idx) / root.values(idx);
  }
  return pot;
}

}  // namespace cgoeit
