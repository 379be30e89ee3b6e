#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cgoeit/common.hpp"
#include "cgoeit/harmonics.hpp"
#include "cgoeit/interior_solver.hpp"
#include "cgoeit/phantom.hpp"
#include "cgoeit/sphere_mesh.hpp"

namespace cgoeit {

enum class OperatorKind { DtnGamma, DtnQ, DtnZero, SingleLayer, DoubleLayerTrace, Kzeta };
enum class Representation { Basis, Nodal };

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

/// Dense boundary operator. In basis rep it acts on real-harmonic
/// coefficients; in nodal rep on values at mesh nodes.
struct BoundaryOperator {
  OperatorKind kind = OperatorKind::DtnGamma;
  Representation rep = Representation::Basis;
  CMatrix matrix;
  int level = -1;
  int degree_max = -1;
  /// Relative size of the antisymmetric part before symmetrization (a
  /// discretization diagnostic; zero for operators that are exact).
  double raw_asymmetry = 0.0;

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Nodal matrix Y M Y^T W of a basis-rep operator.
BoundaryOperator to_nodal(const BoundaryOperator& op, const HarmonicBasis& basis,
                          const BoundaryMesh& mesh);
/// Basis matrix Y^T W N Y of a nodal-rep operator.
BoundaryOperator to_basis(const BoundaryOperator& op, const HarmonicBasis& basis,
                          const BoundaryMesh& mesh);

/// max |<Af,g> - <Ag,f>| / (|f||g|) in the quadrature pairing, evaluated as
/// the Frobenius norm of the antisymmetric part (an upper bound).
double symmetry_defect(const BoundaryOperator& op, const BoundaryMesh& mesh);

/// Radially symmetric admittivity for the ODE oracle.
struct RadialProfile {
  std::function<cdouble(double)> gamma;
  double boundary_radius = 0.85;
  std::vector<double> sample_r;
  std::vector<cdouble> sample_gamma;

  static RadialProfile from_phantom(const PhantomSpec& spec);
  /// gamma = c on all of [0, 1]; test-only, ignores the shell.
  static RadialProfile constant(cdouble c);
};

/// lambda_l for l = 0..L from the Riccati form of the radial equation,
/// z = gamma r u'/u with dz/dt = gamma l(l+1) - z - z^2/gamma in t = ln r,
/// integrated by RK4 with the given number of steps from r = 1e-6.
std::vector<cdouble> radial_dtn(const RadialProfile& profile, int L, int steps = 20000);

/// diag(lambda_l) with multiplicity 2l+1, basis rep.
BoundaryOperator radial_dtn_operator(const std::vector<cdouble>& eigenvalues, OperatorKind kind);

/// Per-solve diagnostics of the volumetric DtN.
struct VolumetricReport {
  double max_residual = 0.0;
  int max_iterations = 0;
  double seconds = 0.0;
};

/// Volumetric DtN from finite-difference interior solves. With h_b = r^l Y_b
/// the harmonic extension, the weak form gives
///   Lambda_ab = l_b delta_ab + int (gamma - 1) grad u_a . grad h_b
/// (or + int q u_a h_b for the Schrodinger form); the two orderings are
/// averaged, so the matrix is symmetric by construction. Each u_a is solved
/// as h_a plus a zero-trace correction driven by the coefficient, so the
/// leading term uses exact harmonics and only the correction carries
/// finite-difference error.
BoundaryOperator volumetric_dtn(const AdmittivityField& field, const BoundaryMesh& mesh,
                                const HarmonicBasis& basis, VolumetricReport* report = nullptr);
BoundaryOperator volumetric_dtn(const PotentialField& potential, const BoundaryMesh& mesh,
                                const HarmonicBasis& basis, VolumetricReport* report = nullptr);

/// Lambda_0 = diag(l) in basis rep.
BoundaryOperator dtn_zero(const BoundaryMesh& mesh, const HarmonicBasis& basis);

/// Lambda_q = gamma^{-1/2} [Lambda_gamma + dgamma/2] gamma^{-1/2} with the
/// traces sampled at mesh nodes. Constant traces are applied in the operator's
/// own representation; general traces go through nodal rep and back.
BoundaryOperator dtn_gamma_to_q(const BoundaryOperator& lambda_gamma, const CVector& gamma_bd,
                                const CVector& dgamma_bd, const BoundaryMesh& mesh,
                                const HarmonicBasis& basis);

/// Boundary data evaluating one real spherical harmonic column.
BoundaryData harmonic_trace(int L, int column);

}  // namespace cgoeit
