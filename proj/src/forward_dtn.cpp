#include "cgoeit/forward_dtn.hpp"

#include <chrono>
#include <cmath>

namespace cgoeit {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::DtnGamma: return "dtn_gamma";
    case OperatorKind::DtnQ: return "dtn_q";
    case OperatorKind::DtnZero: return "dtn_zero";
    case OperatorKind::SingleLayer: return "single_layer";
    case OperatorKind::DoubleLayerTrace: return "double_layer_trace";
    case OperatorKind::Kzeta: return "kzeta";
  }
  return "unknown";
}

OperatorKind operator_kind_from_string(const std::string& name) {
  for (auto k : {OperatorKind::DtnGamma, OperatorKind::DtnQ, OperatorKind::DtnZero,
                 OperatorKind::SingleLayer, OperatorKind::DoubleLayerTrace, OperatorKind::Kzeta}) {
    if (to_string(k) == name) return k;
  }
  throw UsageError("unknown operator kind '" + name + "'");
}

BoundaryOperator to_nodal(const BoundaryOperator& op, const HarmonicBasis& basis,
                          const BoundaryMesh& mesh) {
  if (op.rep == Representation::Nodal) return op;
  if (op.dim() != basis.size()) throw UsageError("operator/basis dimension mismatch");
  BoundaryOperator out = op;
  out.rep = Representation::Nodal;
  const CMatrix Y = basis.values.cast<cdouble>();
  out.matrix = Y * op.matrix * (Y.transpose() * mesh.weight_vector().cast<cdouble>().asDiagonal());
  return out;
}

BoundaryOperator to_basis(const BoundaryOperator& op, const HarmonicBasis& basis,
                          const BoundaryMesh& mesh) {
  if (op.rep == Representation::Basis) return op;
  if (op.dim() != static_cast<Eigen::Index>(mesh.size())) {
    throw UsageError("operator/mesh dimension mismatch");
  }
  BoundaryOperator out = op;
  out.rep = Representation::Basis;
  const CMatrix Y = basis.values.cast<cdouble>();
  out.matrix = Y.transpose() * mesh.weight_vector().cast<cdouble>().asDiagonal() * op.matrix * Y;
  return out;
}

double symmetry_defect(const BoundaryOperator& op, const BoundaryMesh& mesh) {
  if (op.rep == Representation::Basis) {
    return (op.matrix - op.matrix.transpose()).norm();
  }
  // <Nf, g> = g^T W N f; measure in the W-weighted norm.
  const RVector sw = mesh.weight_vector().cwiseSqrt();
  const RVector isw = sw.cwiseInverse();
  const CMatrix WN = mesh.weight_vector().cast<cdouble>().asDiagonal() * op.matrix;
  const CMatrix anti = isw.cast<cdouble>().asDiagonal() * (WN - WN.transpose()) *
                       isw.cast<cdouble>().asDiagonal();
  return anti.norm();
}

RadialProfile RadialProfile::from_phantom(const PhantomSpec& spec) {
  if (!spec.is_radial()) throw UsageError("radial oracle needs a radially symmetric phantom");
  spec.validate();
  RadialProfile p;
  p.gamma = [spec](double r) { return spec.radial_value(r); };
  p.boundary_radius = spec.shell_radius;
  for (int i = 0; i <= 200; ++i) {
    const double r = i / 200.0;
    p.sample_r.push_back(r);
    p.sample_gamma.push_back(spec.radial_value(r));
  }
  return p;
}

RadialProfile RadialProfile::constant(cdouble c) {
  RadialProfile p;
  p.gamma = [c](double) { return c; };
  p.boundary_radius = 0.0;
  p.sample_r = {0.0, 1.0};
  p.sample_gamma = {c, c};
  return p;
}

std::vector<cdouble> radial_dtn(const RadialProfile& profile, int L, int steps) {
  if (L < 0) throw UsageError("degree must be >= 0");
  if (steps < 10) throw UsageError("radial integrator needs at least 10 steps");
  constexpr double kStartRadius = 1e-6;
  const double t0 = std::log(kStartRadius);
  const double dt = -t0 / steps;
  std::vector<cdouble> out(L + 1);
  for (int l = 0; l <= L; ++l) {
    const double ll = l * (l + 1.0);
    auto rhs = [&](double t, cdouble z) {
      const cdouble g = profile.gamma(std::exp(t));
      return g * ll - z - z * z / g;
    };
    cdouble z = profile.gamma(kStartRadius) * static_cast<double>(l);
    double t = t0;
    for (int s = 0; s < steps; ++s) {
      const cdouble k1 = rhs(t, z);
      const cdouble k2 = rhs(t + 0.5 * dt, z + 0.5 * dt * k1);
      const cdouble k3 = rhs(t + 0.5 * dt, z + 0.5 * dt * k2);
      const cdouble k4 = rhs(t + dt, z + dt * k3);
      z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = t0 + (s + 1) * dt;
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw SolverError("radial integration blew up at degree " + std::to_string(l), 0.0);
    }
    out[l] = z;
  }
  return out;
}

BoundaryOperator radial_dtn_operator(const std::vector<cdouble>& eigenvalues, OperatorKind kind) {
  const int L = static_cast<int>(eigenvalues.size()) - 1;
  BoundaryOperator op;
  op.kind = kind;
  op.rep = Representation::Basis;
  op.degree_max = L;
  op.matrix = CMatrix::Zero(harmonic_count(L), harmonic_count(L));
  for (int k = 0; k < harmonic_count(L); ++k) op.matrix(k, k) = eigenvalues[harmonic_degree(k)];
  return op;
}

BoundaryData harmonic_trace(int L, int column) {
  return [L, column](const Vec3& p) -> cdouble { return real_sph_harm(L, p)(column); };
}

namespace {

void check_resolution(const VolumeGrid& grid, int L) {
  // At least four grid points per angular wavelength 2 pi / L on the sphere.
  if (L * grid.spacing() > 0.5 * kPi) {
    throw UsageError("volume grid too coarse for harmonic degree " + std::to_string(L));
  }
}

BoundaryOperator finish(CMatrix A, const HarmonicBasis& basis, const BoundaryMesh& mesh,
                        OperatorKind kind) {
  BoundaryOperator op;
  op.kind = kind;
  op.rep = Representation::Basis;
  op.level = mesh.level;
  op.degree_max = basis.degree_max;
  const double scale = std::max(A.norm(), 1e-300);
  op.raw_asymmetry = (A - A.transpose()).norm() / scale;
  if (A.norm() == 0.0) op.raw_asymmetry = 0.0;
  op.matrix = 0.5 * (A + A.transpose());
  for (int k = 0; k < basis.size(); ++k) op.matrix(k, k) += static_cast<double>(harmonic_degree(k));
  return op;
}

struct Support {
  std::vector<std::size_t> nodes;
  std::vector<cdouble> weight;  // h^3 times the coefficient
};

// Collect grid nodes where the volume integrand is nonzero.
Support collect_support(const VolumeGrid& grid, const CVector& coeff, const InteriorSystem& sys,
                        bool need_neighbors) {
  Support s;
  const double vol = grid.cell_volume();
  const int n = grid.n;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (coeff(idx) == cdouble(0.0)) continue;
    if (!sys.is_unknown(idx)) {
      if (grid.point(idx).norm() >= 1.0) continue;
      throw UsageError("coefficient support reaches the boundary");
    }
    if (need_neighbors) {
      const int i = static_cast<int>(idx % n), j = static_cast<int>((idx / n) % n),
                k = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
      for (int d = 0; d < 3; ++d)
        for (int sgn : {-1, 1}) {
          int ii[3] = {i, j, k};
          ii[d] += sgn;
          if (!sys.is_unknown(grid.index(ii[0], ii[1], ii[2]))) {
            throw UsageError("coefficient support within one cell of the boundary");
          }
        }
    }
    s.nodes.push_back(idx);
    s.weight.push_back(vol * coeff(idx));
  }
  return s;
}

// Nodes of the set dilated by `steps` face-neighbour moves (sorted).
std::vector<std::size_t> dilate(const VolumeGrid& grid, const std::vector<std::size_t>& nodes,
                                int steps) {
  const int n = grid.n;
  std::vector<char> mark(grid.size(), 0);
  for (std::size_t idx : nodes) mark[idx] = 1;
  for (int s = 0; s < steps; ++s) {
    std::vector<char> next = mark;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      if (!mark[idx]) continue;
      const int i = static_cast<int>(idx % n), j = static_cast<int>((idx / n) % n),
                k = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
      for (int d = 0; d < 3; ++d)
        for (int sgn : {-1, 1}) {
          int ii[3] = {i, j, k};
          ii[d] += sgn;
          if (ii[d] < 0 || ii[d] >= n) continue;
          next[grid.index(ii[0], ii[1], ii[2])] = 1;
        }
    }
    mark.swap(next);
  }
  std::vector<std::size_t> out;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (mark[idx]) out.push_back(idx);
  }
  return out;
}

// Runs one zero-Dirichlet correction solve per basis function.
template <class Rows, class PerSolve>
void solve_all(const InteriorSystem& sys, int nb, Rows&& rows, PerSolve&& per_solve,
               VolumetricReport* report) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int iters = 0;
  for (int a = 0; a < nb; ++a) {
    const VolumeField v = sys.solve_rows(rows(a));
    worst = std::max(worst, sys.last_residual());
    iters = std::max(iters, sys.last_iterations());
    per_solve(a, v);
  }
  if (report) {
    report->max_residual = worst;
    report->max_iterations = iters;
    report->seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
}

}  // namespace

BoundaryOperator volumetric_dtn(const AdmittivityField& field, const BoundaryMesh& mesh,
                                const HarmonicBasis& basis, VolumetricReport* report) {
  const VolumeGrid& grid = field.grid();
  check_resolution(grid, basis.degree_max);
  const int nb = basis.size();
  const CVector contrast = field.gamma.values.array() - 1.0;
  const InteriorSystem sys = InteriorSystem::conductivity(field);
  const Support sup = collect_support(grid, contrast, sys, true);
  const auto ns = static_cast<Eigen::Index>(sup.nodes.size());
  const int n = grid.n;
  const std::size_t stride[3] = {1, static_cast<std::size_t>(n),
                                 static_cast<std::size_t>(n) * n};

  // Solid harmonics on the support and two layers around it: the source
  // rows live one layer out and read one more.
  const std::vector<std::size_t> ring = dilate(grid, sup.nodes, 1);
  const std::vector<std::size_t> halo = dilate(grid, sup.nodes, 2);
  std::vector<int> slot(grid.size(), -1);
  RMatrix hv(static_cast<Eigen::Index>(halo.size()), nb);
  RVector vals;
  RMatrix grads;
  for (std::size_t r = 0; r < halo.size(); ++r) {
    slot[halo[r]] = static_cast<int>(r);
    solid_harmonics(basis.degree_max, grid.point(halo[r]), vals, grads);
    hv.row(static_cast<Eigen::Index>(r)) = vals.transpose();
  }
  RMatrix gh[3];
  for (auto& m : gh) m.resize(ns, nb);
  for (Eigen::Index s = 0; s < ns; ++s) {
    solid_harmonics(basis.degree_max, grid.point(sup.nodes[s]), vals, grads);
    for (int d = 0; d < 3; ++d) gh[d].row(s) = grads.col(d).transpose();
  }

  // With u = h + v, div(gamma grad v) = -div((gamma - 1) grad h) and v = 0 on
  // the sphere. The source uses the same midpoint averages as the operator,
  // so the discretisation error of the harmonic h itself never enters.
  auto rows = [&](int a) {
    CVector out = CVector::Zero(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t idx : ring) {
      const cdouble c0 = contrast(static_cast<Eigen::Index>(idx));
      const double h0 = hv(slot[idx], a);
      cdouble acc = 0.0;
      for (int d = 0; d < 3; ++d)
        for (int sgn : {-1, 1}) {
          const std::size_t nbr = sgn > 0 ? idx + stride[d] : idx - stride[d];
          const cdouble mid = 0.5 * (c0 + contrast(static_cast<Eigen::Index>(nbr)));
          if (mid != 0.0) acc += mid * (hv(slot[nbr], a) - h0);
        }
      out(static_cast<Eigen::Index>(idx)) = -acc;
    }
    return out;
  };
  CMatrix gu[3];
  for (int d = 0; d < 3; ++d) gu[d] = gh[d].cast<cdouble>();
  const double inv2h = 0.5 / grid.spacing();
  solve_all(
      sys, nb, rows,
      [&](int a, const VolumeField& v) {
        for (Eigen::Index s = 0; s < ns; ++s) {
          const std::size_t idx = sup.nodes[s];
          for (int d = 0; d < 3; ++d) {
            gu[d](s, a) += (v.values(idx + stride[d]) - v.values(idx - stride[d])) * inv2h;
          }
        }
      },
      report);

  const CVector w = Eigen::Map<const CVector>(sup.weight.data(), ns);
  CMatrix A = CMatrix::Zero(nb, nb);
  for (int d = 0; d < 3; ++d) A += gu[d].transpose() * w.asDiagonal() * gh[d].cast<cdouble>();
  return finish(std::move(A), basis, mesh, OperatorKind::DtnGamma);
}

BoundaryOperator volumetric_dtn(const PotentialField& potential, const BoundaryMesh& mesh,
                                const HarmonicBasis& basis, VolumetricReport* report) {
  const VolumeGrid& grid = potential.grid();
  check_resolution(grid, basis.degree_max);
  const int nb = basis.size();
  const InteriorSystem sys = InteriorSystem::schrodinger(potential);
  const Support sup = collect_support(grid, potential.q.values, sys, false);
  const auto ns = static_cast<Eigen::Index>(sup.nodes.size());

  RMatrix hv(ns, nb);
  RVector vals;
  RMatrix grads;
  for (Eigen::Index s = 0; s < ns; ++s) {
    solid_harmonics(basis.degree_max, grid.point(sup.nodes[s]), vals, grads);
    hv.row(s) = vals.transpose();
  }
  // u = h + v with (-Laplace + q) v = -q h, v = 0 on the sphere.
  const double h2 = grid.spacing() * grid.spacing();
  auto rows = [&](int a) {
    CVector out = CVector::Zero(static_cast<Eigen::Index>(grid.size()));
    for (Eigen::Index s = 0; s < ns; ++s) {
      const auto idx = static_cast<Eigen::Index>(sup.nodes[s]);
      out(idx) = h2 * potential.q.values(idx) * hv(s, a);
    }
    return out;
  };
  CMatrix uv = hv.cast<cdouble>();
  solve_all(
      sys, nb, rows,
      [&](int a, const VolumeField& v) {
        for (Eigen::Index s = 0; s < ns; ++s) uv(s, a) += v.values(sup.nodes[s]);
      },
      report);
  const CVector w = Eigen::Map<const CVector>(sup.weight.data(), ns);
  const CMatrix A = uv.transpose() * w.asDiagonal() * hv.cast<cdouble>();
  return finish(A, basis, mesh, OperatorKind::DtnQ);
}

BoundaryOperator dtn_zero(const BoundaryMesh& mesh, const HarmonicBasis& basis) {
  BoundaryOperator op;
  op.kind = OperatorKind::DtnZero;
  op.rep = Representation::Basis;
  op.level = mesh.level;
  op.degree_max = basis.degree_max;
  op.matrix = CMatrix::Zero(basis.size(), basis.size());
  for (int k = 0; k < basis.size(); ++k) op.matrix(k, k) = static_cast<double>(harmonic_degree(k));
  return op;
}

BoundaryOperator dtn_gamma_to_q(const BoundaryOperator& lambda_gamma, const CVector& gamma_bd,
                                const CVector& dgamma_bd, const BoundaryMesh& mesh,
                                const HarmonicBasis& basis) {
  const auto nn = static_cast<Eigen::Index>(mesh.size());
  if (gamma_bd.size() != nn || dgamma_bd.size() != nn) {
    throw UsageError("boundary traces must be sampled at mesh nodes");
  }
  for (Eigen::Index i = 0; i < nn; ++i) {
    if (!(gamma_bd(i).real() > 0.0)) throw UsageError("boundary trace needs Re gamma > 0");
  }
  BoundaryOperator out;
  const bool constant = (gamma_bd.array() == gamma_bd(0)).all() &&
                        (dgamma_bd.array() == dgamma_bd(0)).all();
  if (constant) {
    // Multiplication by a constant commutes with every representation.
    out = lambda_gamma;
    const cdouble c = gamma_bd(0);
    out.matrix = (lambda_gamma.matrix +
                  0.5 * dgamma_bd(0) * CMatrix::Identity(out.dim(), out.dim())) / c;
  } else {
    out = to_nodal(lambda_gamma, basis, mesh);
    const CVector isq = gamma_bd.unaryExpr([](cdouble g) { return 1.0 / std::sqrt(g); });
    CMatrix m = out.matrix;
    m.diagonal() += 0.5 * dgamma_bd;
    out.matrix = isq.asDiagonal() * m * isq.asDiagonal();
    if (lambda_gamma.rep == Representation::Basis) out = to_basis(out, basis, mesh);
  }
  out.kind = OperatorKind::DtnQ;
  return out;
}

}  // namespace cgoeit
