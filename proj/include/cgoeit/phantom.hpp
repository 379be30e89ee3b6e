#pragma once

#include <string>
#include <vector>

#include "cgoeit/common.hpp"
#include "cgoeit/volume_grid.hpp"

namespace cgoeit {

/// Quintic smoothstep 6t^5 - 15t^4 + 10t^3 clamped to [0, 1]; C^2 at both ends.
double smoothstep5(double t);
double smoothstep5_derivative(double t);

enum class PhantomType { Constant, RadialMultilayer, SmoothedBalls };

struct Inclusion {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  cdouble value = 1.0;
};

/// Admittivity phantom description. Values are gamma = sigma + i*omega*eps
/// with omega already folded in; outside all features gamma is exactly 1.
struct PhantomSpec {
  PhantomType type = PhantomType::Constant;
  cdouble constant_value = 1.0;
  /// Radial multilayer: step radii (ascending) and the value inside each step,
  /// innermost first. The region beyond the last radius is 1.
  std::vector<double> layer_radii;
  std::vector<cdouble> layer_values;
  std::vector<Inclusion> inclusions;
  double transition_width = 0.1;
  double shell_radius = 0.85;
  double omega = 1.0;

  bool is_radial() const;
  /// Throws UsageError on positivity or shell violations.
  void validate() const;
  /// Lower bound c with Re gamma >= c everywhere.
  double re_lower_bound() const;
  cdouble value(const Vec3& x) const;
  /// gamma(r) and d gamma/dr for radial phantoms.
  cdouble radial_value(double r) const;
  cdouble radial_derivative(double r) const;
  /// Largest radius where gamma may differ from 1.
  double support_radius() const;

  static PhantomSpec constant(cdouble value);
  static PhantomSpec two_layer(cdouble inner, double radius, double width);
  /// 1 + contrast * bump, with bump a C^2 radial blob of the given radius.
  static PhantomSpec bump(cdouble contrast, double radius, const Vec3& center = Vec3::Zero());
};

/// gamma sampled on a grid, plus the standing assumptions it was checked against.
struct AdmittivityField {
  VolumeField gamma;
  double omega = 1.0;
  double boundary_margin = 0.85;
  double re_lower_bound = 1.0;
  double max_second_difference = 0.0;

  const VolumeGrid& grid() const { return gamma.grid; }
  /// Build from an arbitrary function without checking phantom invariants.
  static AdmittivityField from_function(const VolumeGrid& grid,
                                        const std::function<cdouble(const Vec3&)>& f,
                                        double boundary_margin = 1.0);
};

/// Maximum |second difference| / h^2 over all axes and interior nodes.
double max_second_difference(const VolumeField& f);

AdmittivityField eval_phantom(const PhantomSpec& spec, const VolumeGrid& grid);

/// q = Laplacian(gamma^{1/2}) / gamma^{1/2}, zero outside the unit ball.
struct PotentialField {
  VolumeField q;
  double support_radius = 1.0;

  const VolumeGrid& grid() const { return q.grid; }
};

PotentialField schrodinger_potential(const AdmittivityField& field);

/// Principal square root of gamma on the grid.
VolumeField sqrt_field(const VolumeField& gamma);

/// Seven-point Laplacian; boundary nodes of the box are set to zero.
VolumeField discrete_laplacian(const VolumeField& f);

}  // namespace cgoeit
