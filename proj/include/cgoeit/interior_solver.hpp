#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "cgoeit/common.hpp"
#include "cgoeit/phantom.hpp"
#include "cgoeit/volume_grid.hpp"

namespace cgoeit {

using BoundaryData = std::function<cdouble(const Vec3&)>;

/// Second-order finite-difference Dirichlet problem on the grid nodes inside
/// the unit ball. Neighbors across the sphere are replaced by the cut point on
/// the sphere (Shortley-Weller), so boundary data enter only at cut points.
///
/// The operator is either div(gamma grad u) or Laplace(u) - q u. The matrix and
/// its preconditioner are built once; solve() may be called per right side.
class InteriorSystem {
 public:
  static constexpr double kRelativeTolerance = 1e-10;
  static constexpr int kMaxIterations = 4000;

  static InteriorSystem conductivity(const AdmittivityField& field);
  static InteriorSystem schrodinger(const PotentialField& potential);

  InteriorSystem(InteriorSystem&&) noexcept;
  InteriorSystem& operator=(InteriorSystem&&) noexcept;
  ~InteriorSystem();

  const VolumeGrid& grid() const { return grid_; }
  std::size_t unknowns() const { return node_of_unknown_.size(); }
  bool is_unknown(std::size_t node) const { return unknown_of_node_[node] >= 0; }

  /// Solve with boundary values g on the sphere. Nodes outside the open ball
  /// receive g(x/|x|) so that difference stencils near the sphere stay finite.
  /// Throws SolverError when the iteration misses the tolerance.
  VolumeField solve(const BoundaryData& g) const;
  /// Zero Dirichlet data with a right-hand side given per grid node, already
  /// in the units of the assembled rows (h^2 times the PDE source). Nodes
  /// outside the open ball are set to zero.
  VolumeField solve_rows(const CVector& rows) const;
  /// Relative residual and iteration count of the most recent solve.
  double last_residual() const { return last_residual_; }
  int last_iterations() const { return last_iterations_; }

 private:
  struct Link {
    int row;
    Vec3 point;
    cdouble coeff;
  };
  struct Factorization;

  InteriorSystem() = default;
  template <class Coefficient>
  void assemble(const VolumeGrid& grid, Coefficient&& half_coeff, const VolumeField* potential);
  CVector solve_unknowns(const CVector& rhs) const;

  VolumeGrid grid_;
  std::vector<int> unknown_of_node_;
  std::vector<std::size_t> node_of_unknown_;
  std::vector<Link> links_;
  Eigen::SparseMatrix<cdouble, Eigen::RowMajor> matrix_;
  std::unique_ptr<Factorization> factor_;
  mutable double last_residual_ = 0.0;
  mutable int last_iterations_ = 0;
};

/// Solve (-Laplace + q) w = 0 in the ball with w = f on the sphere.
VolumeField schrodinger_dirichlet_solve(const PotentialField& q, const BoundaryData& f);

}  // namespace cgoeit
