#include "cgoeit/lippmann_schwinger.hpp"

#include <cmath>

namespace cgoeit {

namespace {

KrylovResult born_iteration(const std::function<CVector(const CVector&)>& apply_A,
                            const CVector& b, const KrylovOptions& opts) {
  KrylovResult res;
  const double bnorm = b.norm();
  res.x = CVector::Zero(b.size());
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  for (int it = 0; it < opts.max_iterations; ++it) {
    const CVector Ax = apply_A(res.x);
    const CVector r = b - res.x - Ax;
    res.residual = r.norm() / bnorm;
    res.history.push_back(res.residual);
    res.iterations = it;
    if (res.residual <= opts.tolerance) {
      res.converged = true;
      return res;
    }
    if (!std::isfinite(res.residual) || res.residual > 1e3) return res;
    res.x += r;
  }
  return res;
}

}  // namespace

KrylovResult solve_identity_plus(const std::function<CVector(const CVector&)>& apply_A,
                                 const CVector& b, const KrylovOptions& opts) {
  if (opts.born) return born_iteration(apply_A, b, opts);
  KrylovResult res;
  const Eigen::Index n = b.size();
  res.x = CVector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  const int m = std::max(1, opts.restart);
  CMatrix V(n, m + 1);
  CMatrix Hm = CMatrix::Zero(m + 1, m);
  std::vector<cdouble> cs(m), sn(m);
  CVector g(m + 1);
  int total = 0;
  CVector r = b;  // x = 0
  while (total < opts.max_iterations) {
    double beta = r.norm();
    res.residual = beta / bnorm;
    if (res.residual <= opts.tolerance) {
      res.converged = true;
      break;
    }
    V.col(0) = r / beta;
    g.setZero();
    g(0) = beta;
    Hm.setZero();
    int j = 0;
    for (; j < m && total < opts.max_iterations; ++j, ++total) {
      CVector w = V.col(j) + apply_A(V.col(j));
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        Hm(i, j) = V.col(i).dot(w);
        w -= Hm(i, j) * V.col(i);
      }
      const double wn = w.norm();
      Hm(j + 1, j) = wn;
      if (wn > 0.0) V.col(j + 1) = w / wn;
      for (int i = 0; i < j; ++i) {
        const cdouble t = std::conj(cs[i]) * Hm(i, j) + std::conj(sn[i]) * Hm(i + 1, j);
        Hm(i + 1, j) = -sn[i] * Hm(i, j) + cs[i] * Hm(i + 1, j);
        Hm(i, j) = t;
      }
      const cdouble a = Hm(j, j), c = Hm(j + 1, j);
      const double rho = std::sqrt(std::norm(a) + std::norm(c));
      cs[j] = rho > 0.0 ? a / rho : 1.0;
      sn[j] = rho > 0.0 ? c / rho : 0.0;
      Hm(j, j) = rho;
      Hm(j + 1, j) = 0.0;
      g(j + 1) = -sn[j] * g(j);
      g(j) = std::conj(cs[j]) * g(j);
      res.residual = std::abs(g(j + 1)) / bnorm;
      res.history.push_back(res.residual);
      if (res.residual <= opts.tolerance || wn == 0.0) {
        ++j;
        ++total;
        break;
      }
    }
    // Back substitution for the j-dimensional least-squares solution.
    CVector y(j);
    for (int i = j - 1; i >= 0; --i) {
      cdouble acc = g(i);
      for (int k = i + 1; k < j; ++k) acc -= Hm(i, k) * y(k);
      y(i) = acc / Hm(i, i);
    }
    res.x += V.leftCols(j) * y;
    r = b - res.x - apply_A(res.x);
    res.residual = r.norm() / bnorm;
    if (res.residual <= opts.tolerance) {
      res.converged = true;
      break;
    }
    if (!std::isfinite(res.residual)) break;
  }
  res.iterations = total;
  return res;
}

LsSolution lippmann_schwinger_solve(const PotentialField& q, const FaddeevKernel& kernel,
                                    const KrylovOptions& opts) {
  const VolumeGrid& grid = kernel.base;
  if (q.grid().n != grid.n || q.grid().pad != grid.pad) {
    throw UsageError("potential and kernel grids differ");
  }
  auto apply = [&](const CVector& v) {
    VolumeField f(grid);
    f.values = q.q.values.cwiseProduct(v);
    return convolve_gzeta(kernel, f).values;
  };
  VolumeField rhs_field(grid);
  rhs_field.values = q.q.values;
  const CVector rhs = -convolve_gzeta(kernel, rhs_field).values;
  const KrylovResult kr = solve_identity_plus(apply, rhs, opts);

  LsSolution sol;
  sol.zeta = kernel.zeta;
  sol.phi = VolumeField(grid);
  sol.phi.values = kr.x;
  sol.psi = VolumeField(grid);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const cdouble e = std::exp(kI * bdot(kernel.zeta.zeta, grid.point(idx)));
    sol.psi.values(idx) = e * (1.0 + kr.x(idx));
  }
  sol.converged = kr.converged;
  sol.iterations = kr.iterations;
  sol.residual = kr.residual;
  sol.history = kr.history;
  sol.status = kr.converged ? "ok" : "possible exceptional point";
  return sol;
}

MuSolution mu_solve(const PotentialField& q, const FaddeevKernel& kernel,
                    const KrylovOptions& opts) {
  const VolumeGrid& grid = kernel.base;
  if (q.grid().n != grid.n || q.grid().pad != grid.pad) {
    throw UsageError("potential and kernel grids differ");
  }
  const RVector absq = q.q.values.cwiseAbs();
  const double eps = kQtildeThreshold * (absq.size() ? absq.maxCoeff() : 0.0);
  MuSolution out;
  out.qtilde = VolumeField(grid);
  for (Eigen::Index i = 0; i < absq.size(); ++i) {
    if (absq(i) >= eps && absq(i) > 0.0) out.qtilde.values(i) = q.q.values(i) / absq(i);
  }
  const CVector aq = absq.cast<cdouble>();
  auto apply = [&](const CVector& v) {
    VolumeField f(grid);
    f.values = out.qtilde.values.cwiseProduct(v);
    return CVector(aq.cwiseProduct(convolve_gzeta(kernel, f).values));
  };
  const KrylovResult kr = solve_identity_plus(apply, aq, opts);
  out.mu = VolumeField(grid);
  out.mu.values = kr.x;
  out.converged = kr.converged;
  out.iterations = kr.iterations;
  out.residual = kr.residual;
  out.status = kr.converged ? "ok" : "possible exceptional point";
  return out;
}

double weighted_norm(const VolumeField& f, double delta) {
  double acc = 0.0;
  for (std::size_t idx = 0; idx < f.grid.size(); ++idx) {
    const double w = std::pow(1.0 + f.grid.point(idx).squaredNorm(), 0.5 * (delta - 1.0));
    acc += std::norm(w * f.values(idx));
  }
  return std::sqrt(acc * f.grid.cell_volume());
}

}  // namespace cgoeit
