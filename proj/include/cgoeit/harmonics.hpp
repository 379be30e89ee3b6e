#pragma once

#include <functional>
#include <vector>

#include "cgoeit/common.hpp"
#include "cgoeit/sphere_mesh.hpp"

namespace cgoeit {

/// Number of real spherical harmonics of degree <= L.
inline int harmonic_count(int L) { return (L + 1) * (L + 1); }
/// Column index of Y_l^m: l ascending, m from -l to l.
inline int harmonic_index(int l, int m) { return l * l + l + m; }
/// Degree of the harmonic stored in column idx.
int harmonic_degree(int idx);

/// Real orthonormal spherical harmonics Y_l^m(x/|x|) for l <= L.
RVector real_sph_harm(int L, const Vec3& x);

/// Solid harmonics r^l Y_l^m(x/|x|) and their Cartesian gradients.
/// grads is (L+1)^2 x 3.
void solid_harmonics(int L, const Vec3& x, RVector& values, RMatrix& grads);

/// Orthonormal real spherical harmonic basis sampled at mesh nodes.
struct HarmonicBasis {
  int degree_max = 0;
  RMatrix values;  // nodes x (L+1)^2
  double gram_defect = 0.0;
  double gram_tolerance = 0.0;

  int size() const { return static_cast<int>(values.cols()); }
  /// Degree of each column.
  std::vector<int> degrees() const;
  /// Quadrature coefficients Y^T W f of nodal data.
  CVector project(const BoundaryMesh& mesh, const CVector& nodal) const;
  /// Nodal values of the expansion sum_k c_k Y_k.
  CVector synthesize(const CVector& coeffs) const;
};

/// Declared Gram tolerance for a (level, L) pair.
double gram_tolerance(int level, int L);

HarmonicBasis build_harmonic_basis(const BoundaryMesh& mesh, int L);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Tensor product quadrature on the unit sphere (Gauss in cos(theta),
/// trapezoid in phi). Exact for polynomials of degree <= exact_degree.
struct SphereQuadrature {
  std::vector<Vec3> points;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return points.size(); }
  /// Basis matrix Y(points), points x (L+1)^2.
  RMatrix basis(int L) const;
};

SphereQuadrature build_sphere_quadrature(int exact_degree);

/// Harmonic coefficients <e^{i x.kappa}, Y_lm> over the unit sphere for a
/// complex wave vector with kappa.kappa = 0 (the exponential is harmonic,
/// so its degree-l part is (i x.kappa)^l / l!).
CVector harmonic_exponential_coefficients(const CVec3& kappa, int L);

}  // namespace cgoeit
