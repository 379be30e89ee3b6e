#pragma once

#include <vector>

#include "cgoeit/common.hpp"
#include "cgoeit/faddeev.hpp"
#include "cgoeit/harmonics.hpp"
#include "cgoeit/sphere_mesh.hpp"

namespace cgoeit {

enum class LayerKind { S, B, Bdagger, Hcal };

/// Nodal layer operator with quadrature weights folded in:
/// (A f)_i = sum_j matrix(i, j) f_j.
struct LayerOperator {
  LayerKind kind = LayerKind::S;
  CVec3 zeta = CVec3::Zero();
  CMatrix matrix;
};

/// Classical single layer on the unit sphere by singularity subtraction:
/// (S_0 f)(x_i) = sum_j w_j G_0(x_i - x_j)(f_j - f_i) + f_i, using S_0 1 = 1.
CMatrix single_layer_classical(const BoundaryMesh& mesh);

/// Smooth part: matrix(i, j) = w_j H_zeta(x_i - x_j), diagonal included.
LayerOperator assemble_hcal(const BoundaryMesh& mesh, const CVec3& zeta);
LayerOperator assemble_single_layer(const BoundaryMesh& mesh, const CVec3& zeta);
/// On the unit sphere d/dnu_y G_0(x - y) = -G_0(x - y)/2, so B_0 = -S_0/2;
/// the zeta part adds w_j dH/dnu_y(x_i - x_j).
LayerOperator assemble_double_layer_trace(const BoundaryMesh& mesh, const CVec3& zeta);
/// B_0^dagger = -S_0/2 as well; the zeta part adds w_j dH/dnu_x(x_i - x_j).
LayerOperator assemble_bdagger(const BoundaryMesh& mesh, const CVec3& zeta);

/// Exact limits of layer potentials of a band-limited density on the unit
/// sphere, built from the classical spectra and accurate product quadrature
/// of the smooth H part. Used as the reference in jump-relation checks.
struct LayerLimits {
  CVector single_inside, single_outside;   // S f at r -> 1-, 1+
  CVector double_inside, double_outside;   // D f at r -> 1-, 1+
  CVector dsingle_inside, dsingle_outside; // d/dnu S f at r -> 1-, 1+
};
LayerLimits layer_limits(const CVector& coeffs, int L, const CVec3& zeta,
                         const std::vector<Vec3>& targets);

/// Densities and targets for exterior evaluation:
///   psi(x) = exp(i x.zeta) - S_zeta f_S(x) + D_zeta f_D(x).
/// Direct nodal quadrature; every target must be at least one mesh spacing
/// outside the sphere.
CVector eval_exterior_field(const BoundaryMesh& mesh, const CVec3& zeta, const CVector& f_S,
                            const CVector& f_D, const std::vector<Vec3>& targets);

/// The single layer restricted to band-limited densities sum_b c_b Y_b.
/// S_zeta Y_b = S_0 Y_b + integral of H_zeta(x - y) Y_b(y) over the sphere,
/// with S_0 Y_b = Y_b/(2l+1) on the sphere, r^l Y_b/(2l+1) inside and
/// r^{-l-1} Y_b/(2l+1) outside. The H part uses a tensor sphere
/// quadrature whose degree follows |Im zeta|.
class BandLimitedSingleLayer {
 public:
  BandLimitedSingleLayer(const CVec3& zeta, int L);

  const CVec3& zeta() const { return zeta_; }
  int degree() const { return L_; }
  const SphereQuadrature& quadrature() const { return quad_; }

  /// Galerkin matrix <Y_a, S_zeta Y_b>, (L+1)^2 square.
  const CMatrix& galerkin() const { return galerkin_; }
  /// Values of S_zeta Y_b at arbitrary targets (rows) for all b (columns).
  CMatrix evaluate(const std::vector<Vec3>& targets) const;
  /// exp(-i x.zeta) S_zeta Y_b(x), numerically stable far from the sphere.
  CMatrix evaluate_scaled(const std::vector<Vec3>& targets) const;

 private:
  CVec3 zeta_;
  int L_;
  SphereQuadrature quad_;
  RMatrix Yq_;  // quadrature points x basis
  CMatrix galerkin_;
};

/// Quadrature degree used for smooth H_zeta integrals at this |Im zeta|.
int smooth_quadrature_degree(double s, int L);

}  // namespace cgoeit
