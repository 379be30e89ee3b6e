#include "cgoeit/interior_solver.hpp"

#include <cmath>

#include <Eigen/IterativeLinearSolvers>

namespace cgoeit {

struct InteriorSystem::Factorization {
  Eigen::BiCGSTAB<Eigen::SparseMatrix<cdouble, Eigen::RowMajor>, Eigen::IncompleteLUT<cdouble>>
      solver;
};

InteriorSystem::InteriorSystem(InteriorSystem&&) noexcept = default;
InteriorSystem& InteriorSystem::operator=(InteriorSystem&&) noexcept = default;
InteriorSystem::~InteriorSystem() = default;

namespace {

// Nodes this close to the sphere (in units of h) count as boundary nodes.
constexpr double kOnSphere = 1e-9;
// Cut fractions are kept away from zero to bound the stencil weights.
constexpr double kMinFraction = 1e-6;

}  // namespace

template <class Coefficient>
void InteriorSystem::assemble(const VolumeGrid& grid, Coefficient&& half_coeff,
                              const VolumeField* potential) {
  grid_ = grid;
  const double h = grid.spacing();
  const int n = grid.n;
  unknown_of_node_.assign(grid.size(), -1);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.point(idx).norm() < 1.0 - kOnSphere * h) {
      unknown_of_node_[idx] = static_cast<int>(node_of_unknown_.size());
      node_of_unknown_.push_back(idx);
    }
  }
  const auto m = static_cast<Eigen::Index>(node_of_unknown_.size());
  std::vector<Eigen::Triplet<cdouble>> trips;
  trips.reserve(static_cast<std::size_t>(m) * 7);

  for (Eigen::Index row = 0; row < m; ++row) {
    const std::size_t node = node_of_unknown_[row];
    const int i = static_cast<int>(node % n);
    const int j = static_cast<int>((node / n) % n);
    const int k = static_cast<int>(node / (static_cast<std::size_t>(n) * n));
    const Vec3 x = grid.point(i, j, k);
    cdouble diag = 0.0;
    for (int d = 0; d < 3; ++d) {
      // Distances (as fractions of h) and coefficients on both sides.
      double theta[2];
      cdouble coeff[2];
      int nb_unknown[2];
      Vec3 nb_point[2];
      for (int side = 0; side < 2; ++side) {
        const int s = side == 0 ? -1 : 1;
        int ii[3] = {i, j, k};
        ii[d] += s;
        const std::size_t nb = grid.index(ii[0], ii[1], ii[2]);
        nb_unknown[side] = unknown_of_node_[nb];
        if (nb_unknown[side] >= 0) {
          theta[side] = 1.0;
          nb_point[side] = grid.point(ii[0], ii[1], ii[2]);
        } else {
          const double disc = x(d) * x(d) + 1.0 - x.squaredNorm();
          const double t = -s * x(d) + std::sqrt(std::max(disc, 0.0));
          theta[side] = std::clamp(t / h, kMinFraction, 1.0);
          nb_point[side] = x;
          nb_point[side](d) += s * theta[side] * h;
          nb_point[side].normalize();
        }
        coeff[side] = half_coeff(node, x, nb_unknown[side] >= 0 ? static_cast<long>(nb) : -1L,
                                 nb_point[side]);
      }
      const double span = 0.5 * (theta[0] + theta[1]);
      for (int side = 0; side < 2; ++side) {
        const cdouble w = coeff[side] / (theta[side] * span);
        diag -= w;
        if (nb_unknown[side] >= 0) {
          trips.emplace_back(static_cast<int>(row), nb_unknown[side], w);
        } else {
          links_.push_back({static_cast<int>(row), nb_point[side], w});
        }
      }
    }
    if (potential) diag -= h * h * potential->values(node);
    trips.emplace_back(static_cast<int>(row), static_cast<int>(row), diag);
  }
  matrix_.resize(m, m);
  matrix_.setFromTriplets(trips.begin(), trips.end());
  matrix_.makeCompressed();

  factor_ = std::make_unique<Factorization>();
  factor_->solver.preconditioner().setDroptol(1e-5);
  factor_->solver.preconditioner().setFillfactor(10);
  factor_->solver.setTolerance(kRelativeTolerance);
  factor_->solver.setMaxIterations(kMaxIterations);
  factor_->solver.compute(matrix_);
  if (factor_->solver.info() != Eigen::Success) {
    throw SolverError("interior preconditioner construction failed", 1.0);
  }
}

InteriorSystem InteriorSystem::conductivity(const AdmittivityField& field) {
  InteriorSystem sys;
  const VolumeField& g = field.gamma;
  // Midpoint value of gamma between the node and its neighbor or cut point.
  auto half = [&g](std::size_t node, const Vec3& x, long nb, const Vec3& p) -> cdouble {
    const cdouble other = nb >= 0 ? g.values(nb) : g.interpolate(p);
    (void)x;
    return 0.5 * (g.values(node) + other);
  };
  sys.assemble(field.grid(), half, nullptr);
  return sys;
}

InteriorSystem InteriorSystem::schrodinger(const PotentialField& potential) {
  InteriorSystem sys;
  auto unit = [](std::size_t, const Vec3&, long, const Vec3&) -> cdouble { return 1.0; };
  sys.assemble(potential.grid(), unit, &potential.q);
  return sys;
}

CVector InteriorSystem::solve_unknowns(const CVector& rhs) const {
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    last_iterations_ = 0;
    last_residual_ = 0.0;
    return CVector::Zero(matrix_.rows());
  }
  CVector sol = factor_->solver.solve(rhs);
  last_iterations_ = static_cast<int>(factor_->solver.iterations());
  last_residual_ = (matrix_ * sol - rhs).norm() / bnorm;
  // BiCGSTAB's own estimate can drift from the true residual; check it.
  if (!(last_residual_ <= 10.0 * kRelativeTolerance)) {
    throw SolverError(
        "interior Dirichlet solve did not converge (possible Dirichlet eigenvalue nearby)",
        last_residual_);
  }
  return sol;
}

VolumeField InteriorSystem::solve_rows(const CVector& rows) const {
  if (rows.size() != static_cast<Eigen::Index>(grid_.size())) {
    throw UsageError("source must have one entry per grid node");
  }
  CVector rhs(matrix_.rows());
  for (std::size_t u = 0; u < node_of_unknown_.size(); ++u) {
    rhs(static_cast<Eigen::Index>(u)) = rows(static_cast<Eigen::Index>(node_of_unknown_[u]));
  }
  const CVector sol = solve_unknowns(rhs);
  VolumeField out(grid_);
  for (std::size_t u = 0; u < node_of_unknown_.size(); ++u) {
    out.values(static_cast<Eigen::Index>(node_of_unknown_[u])) = sol(static_cast<Eigen::Index>(u));
  }
  return out;
}

VolumeField InteriorSystem::solve(const BoundaryData& g) const {
  CVector rhs = CVector::Zero(matrix_.rows());
  for (const auto& link : links_) rhs(link.row) -= link.coeff * g(link.point);
  VolumeField out(grid_);
  const CVector sol = solve_unknowns(rhs);
  for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
    const int u = unknown_of_node_[idx];
    if (u >= 0) {
      out.values(idx) = sol(u);
    } else {
      const Vec3 p = grid_.point(idx);
      out.values(idx) = g(p.norm() > 0.0 ? Vec3(p.normalized()) : Vec3(0, 0, 1));
    }
  }
  return out;
}

VolumeField schrodinger_dirichlet_solve(const PotentialField& q, const BoundaryData& f) {
  return InteriorSystem::schrodinger(q).solve(f);
}

}  // namespace cgoeit
