#pragma once

#include <memory>
#include <vector>

#include "cgoeit/common.hpp"
#include "cgoeit/volume_grid.hpp"

namespace cgoeit {

/// zeta in C^3 with zeta.zeta = 0 (or zeta = 0, the classical limit).
struct ComplexFrequency {
  CVec3 zeta = CVec3::Zero();

  ComplexFrequency() = default;
  explicit ComplexFrequency(const CVec3& z);

  double norm() const { return zeta.norm(); }
  bool is_zero() const { return zeta.norm() == 0.0; }
  /// Throws UsageError unless |zeta.zeta| <= 1e-12 |zeta|^2.
  void validate() const;
};

/// Pointwise Faddeev functions. With zeta = k + i m, s = |m| and
/// x_m = x.m/s, r = |x - x_m m/s|, the harmonic remainder is
///   H(x) = -1/(4 pi) int_0^s J0(rho r) exp(-rho x_m) drho,
/// G = 1/(4 pi |x|) + H and g = exp(-i x.zeta) G = exp(-i k.x) R(x) with R
/// real and bounded. The rho-integral is rewritten through the Bessel
/// integral J0(a) = (1/pi) int_0^pi exp(i a cos t) dt as a smooth periodic
/// integral in t, evaluated by the trapezoid rule.
class FaddeevFunction {
 public:
  explicit FaddeevFunction(const CVec3& zeta);

  const CVec3& zeta() const { return zeta_; }
  double s() const { return s_; }

  cdouble H(const Vec3& x) const;
  /// Gradient of H (complex components).
  CVec3 grad_H(const Vec3& x) const;
  /// G_zeta; x must be nonzero.
  cdouble G(const Vec3& x) const;
  /// g_zeta; x must be nonzero.
  cdouble g(const Vec3& x) const;
  /// g_zeta averaged over the grid cell of side h centered at the origin.
  cdouble g_origin_cell(double h) const;
  /// Trapezoid nodes used for the most expensive evaluation so far.
  int max_nodes() const { return max_nodes_; }

 private:
  void coords(const Vec3& x, double& xm, double& r, Vec3& rhat) const;
  cdouble F(double xm, double r) const;
  double R(const Vec3& x) const;

  CVec3 zeta_;
  Vec3 k_ = Vec3::Zero();
  Vec3 mhat_ = Vec3::UnitZ();
  double s_ = 0.0;
  mutable int max_nodes_ = 0;
};

/// Cube-average of 1/|x| over [-1/2, 1/2]^3.
inline constexpr double kCubeInverseDistance = 2.3800772027925;

/// Samples of g_zeta at all node differences of a base grid, with the FFT of
/// the circularly embedded kernel cached for convolution.
struct FaddeevKernel {
  ComplexFrequency zeta;
  VolumeGrid base;
  /// Grid of node differences: 2n-1 points per axis with the base spacing.
  VolumeGrid grid;
  VolumeField g;
  int quadrature_nodes = 0;
  /// FFT of the kernel on the (2n)^3 circular grid, times h^3.
  std::shared_ptr<const std::vector<cdouble>> spectrum;
};

FaddeevKernel faddeev_gzeta(const VolumeGrid& base, const ComplexFrequency& zeta);

/// H_zeta = G_zeta - G_0 on the kernel's difference grid (smooth everywhere,
/// so the origin is included).
VolumeField harmonic_remainder(const FaddeevKernel& kernel);

/// (g_zeta * f)(x_i) = h^3 sum_j g(x_i - x_j) f(x_j) over the base grid by
/// FFT; exact linear convolution at every base node. f must vanish outside
/// the closed unit ball.
VolumeField convolve_gzeta(const FaddeevKernel& kernel, const VolumeField& f);

}  // namespace cgoeit
