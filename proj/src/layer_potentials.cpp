#include "cgoeit/layer_potentials.hpp"

#include <cmath>

namespace cgoeit {

namespace {

inline double g0(const Vec3& d) { return 1.0 / (4.0 * kPi * d.norm()); }

// Rotation taking e_z to the given unit vector.
Eigen::Matrix3d frame_to(const Vec3& axis) {
  const Vec3 z = axis.normalized();
  const Vec3 seed = std::abs(z(0)) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 x = (seed - seed.dot(z) * z).normalized();
  const Vec3 y = z.cross(x);
  Eigen::Matrix3d R;
  R.col(0) = x;
  R.col(1) = y;
  R.col(2) = z;
  return R;
}

}  // namespace

CMatrix single_layer_classical(const BoundaryMesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.size());
  CMatrix S = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = mesh.weights[j] * g0(mesh.nodes[i] - mesh.nodes[j]);
      S(i, j) = v;
      rowsum += v;
    }
    S(i, i) = 1.0 - rowsum;
  }
  return S;
}

LayerOperator assemble_hcal(const BoundaryMesh& mesh, const CVec3& zeta) {
  LayerOperator op;
  op.kind = LayerKind::Hcal;
  op.zeta = zeta;
  const auto n = static_cast<Eigen::Index>(mesh.size());
  op.matrix = CMatrix::Zero(n, n);
  if (zeta.norm() == 0.0) return op;
  const FaddeevFunction fn(zeta);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      op.matrix(i, j) = mesh.weights[j] * fn.H(mesh.nodes[i] - mesh.nodes[j]);
  return op;
}

LayerOperator assemble_single_layer(const BoundaryMesh& mesh, const CVec3& zeta) {
  LayerOperator op = assemble_hcal(mesh, zeta);
  op.kind = LayerKind::S;
  op.matrix += single_layer_classical(mesh);
  return op;
}

namespace {

LayerOperator assemble_normal_derivative(const BoundaryMesh& mesh, const CVec3& zeta,
                                         bool at_target) {
  LayerOperator op;
  op.kind = at_target ? LayerKind::Bdagger : LayerKind::B;
  op.zeta = zeta;
  op.matrix = -0.5 * single_layer_classical(mesh);
  if (zeta.norm() == 0.0) return op;
  const FaddeevFunction fn(zeta);
  const auto n = static_cast<Eigen::Index>(mesh.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const CVec3 grad = fn.grad_H(mesh.nodes[i] - mesh.nodes[j]);
      // d/dnu_y H(x - y) = -grad H . nu_y ; d/dnu_x H(x - y) = grad H . nu_x
      const cdouble dn = at_target ? bdot(grad, mesh.normals[i]) : -bdot(grad, mesh.normals[j]);
      op.matrix(i, j) += mesh.weights[j] * dn;
    }
  return op;
}

}  // namespace

LayerOperator assemble_double_layer_trace(const BoundaryMesh& mesh, const CVec3& zeta) {
  return assemble_normal_derivative(mesh, zeta, false);
}

LayerOperator assemble_bdagger(const BoundaryMesh& mesh, const CVec3& zeta) {
  return assemble_normal_derivative(mesh, zeta, true);
}

int smooth_quadrature_degree(double s, int L) {
  return L + 2 * static_cast<int>(std::ceil(2.0 * s)) + 24;
}

LayerLimits layer_limits(const CVector& coeffs, int L, const CVec3& zeta,
                         const std::vector<Vec3>& targets) {
  const int nb = harmonic_count(L);
  if (coeffs.size() != nb) throw UsageError("coefficient vector does not match degree");
  const auto nt = static_cast<Eigen::Index>(targets.size());
  LayerLimits lim;
  for (CVector* v : {&lim.single_inside, &lim.single_outside, &lim.double_inside,
                     &lim.double_outside, &lim.dsingle_inside, &lim.dsingle_outside}) {
    *v = CVector::Zero(nt);
  }
  const FaddeevFunction fn(zeta);
  const SphereQuadrature quad = build_sphere_quadrature(smooth_quadrature_degree(fn.s(), L));
  const RMatrix Yq = quad.basis(L);
  const CVector density = Yq.cast<cdouble>() * coeffs;
  for (Eigen::Index t = 0; t < nt; ++t) {
    const Vec3 x = targets[t].normalized();
    const RVector Y = real_sph_harm(L, x);
    cdouble s = 0.0, di = 0.0, dout = 0.0, dsi = 0.0, dso = 0.0;
    for (int b = 0; b < nb; ++b) {
      const double l = harmonic_degree(b);
      const cdouble c = coeffs(b) * Y(b);
      s += c / (2.0 * l + 1.0);
      di += -c * (l + 1.0) / (2.0 * l + 1.0);
      dout += c * l / (2.0 * l + 1.0);
      dsi += c * l / (2.0 * l + 1.0);
      dso += -c * (l + 1.0) / (2.0 * l + 1.0);
    }
    cdouble hs = 0.0, hd = 0.0, hds = 0.0;
    if (fn.s() > 0.0) {
      for (std::size_t q = 0; q < quad.size(); ++q) {
        const Vec3 d = x - quad.points[q];
        const cdouble wf = quad.weights[q] * density(static_cast<Eigen::Index>(q));
        hs += wf * fn.H(d);
        const CVec3 grad = fn.grad_H(d);
        hd += -wf * bdot(grad, quad.points[q]);
        hds += wf * bdot(grad, x);
      }
    }
    lim.single_inside(t) = s + hs;
    lim.single_outside(t) = s + hs;
    lim.double_inside(t) = di + hd;
    lim.double_outside(t) = dout + hd;
    lim.dsingle_inside(t) = dsi + hds;
    lim.dsingle_outside(t) = dso + hds;
  }
  return lim;
}

CVector eval_exterior_field(const BoundaryMesh& mesh, const CVec3& zeta, const CVector& f_S,
                            const CVector& f_D, const std::vector<Vec3>& targets) {
  const auto n = static_cast<Eigen::Index>(mesh.size());
  if (f_S.size() != n || f_D.size() != n) throw UsageError("density size does not match mesh");
  const double h = mesh.spacing();
  const FaddeevFunction fn(zeta);
  CVector out(static_cast<Eigen::Index>(targets.size()));
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Vec3& x = targets[t];
    if (x.norm() < 1.0 + h) {
      throw UsageError("exterior target closer to the sphere than one mesh spacing");
    }
    cdouble acc = std::exp(kI * bdot(zeta, x));
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vec3 d = x - mesh.nodes[j];
      const double w = mesh.weights[j];
      const double r = d.norm();
      // Classical kernel and its y-normal derivative, plus the smooth part.
      cdouble G = 1.0 / (4.0 * kPi * r);
      cdouble dG = d.dot(mesh.normals[j]) / (4.0 * kPi * r * r * r);
      if (fn.s() > 0.0) {
        G += fn.H(d);
        dG -= bdot(fn.grad_H(d), mesh.normals[j]);
      }
      acc += w * (-G * f_S(j) + dG * f_D(j));
    }
    out(static_cast<Eigen::Index>(t)) = acc;
  }
  return out;
}

BandLimitedSingleLayer::BandLimitedSingleLayer(const CVec3& zeta, int L) : zeta_(zeta), L_(L) {
  const FaddeevFunction fn(zeta);
  const int degree = smooth_quadrature_degree(fn.s(), L);
  quad_ = build_sphere_quadrature(degree);
  // Align the quadrature pole with Im zeta: H(p - q) then depends only on
  // the two polar indices and the azimuthal index difference.
  const Vec3 axis = fn.s() > 0.0 ? Vec3(zeta.imag() / fn.s()) : Vec3::UnitZ();
  const Eigen::Matrix3d R = frame_to(axis);
  for (auto& p : quad_.points) p = R * p;
  Yq_ = quad_.basis(L);

  const int nb = harmonic_count(L);
  galerkin_ = CMatrix::Zero(nb, nb);
  for (int b = 0; b < nb; ++b) {
    galerkin_(b, b) = 1.0 / (2.0 * harmonic_degree(b) + 1.0);
  }
  if (fn.s() == 0.0) return;

  const int n_theta = degree / 2 + 1;
  const int n_phi = degree + 1;
  const auto Q = static_cast<Eigen::Index>(quad_.size());
  // table(i, j, dphi) = H(p(i, 0) - p(j, dphi)); p(i, k) has index i*n_phi + k.
  std::vector<cdouble> table(static_cast<std::size_t>(n_theta) * n_theta * n_phi);
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_theta; ++j)
      for (int k = 0; k < n_phi; ++k) {
        table[(static_cast<std::size_t>(i) * n_theta + j) * n_phi + k] =
            fn.H(quad_.points[i * n_phi] - quad_.points[j * n_phi + k]);
      }
  CMatrix Hm(Q, Q);
  for (int i = 0; i < n_theta; ++i)
    for (int a = 0; a < n_phi; ++a)
      for (int j = 0; j < n_theta; ++j)
        for (int b = 0; b < n_phi; ++b) {
          const int k = (b - a + n_phi) % n_phi;
          Hm(i * n_phi + a, j * n_phi + b) =
              table[(static_cast<std::size_t>(i) * n_theta + j) * n_phi + k];
        }
  const RVector w = Eigen::Map<const RVector>(quad_.weights.data(), Q);
  const CMatrix WY = (w.asDiagonal() * Yq_).cast<cdouble>();
  galerkin_ += WY.transpose() * Hm * WY;
}

CMatrix BandLimitedSingleLayer::evaluate(const std::vector<Vec3>& targets) const {
  const FaddeevFunction fn(zeta_);
  const int nb = harmonic_count(L_);
  const auto Q = static_cast<Eigen::Index>(quad_.size());
  CMatrix out(static_cast<Eigen::Index>(targets.size()), nb);
  CVector hrow(Q);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Vec3& x = targets[t];
    const double r = x.norm();
    const RVector Y = real_sph_harm(L_, x);
    const auto row = static_cast<Eigen::Index>(t);
    for (int b = 0; b < nb; ++b) {
      const int l = harmonic_degree(b);
      const double radial = r <= 1.0 ? std::pow(r, l) : std::pow(r, -l - 1);
      out(row, b) = radial * Y(b) / (2.0 * l + 1.0);
    }
    if (fn.s() == 0.0) continue;
    for (Eigen::Index q = 0; q < Q; ++q) hrow(q) = quad_.weights[q] * fn.H(x - quad_.points[q]);
    out.row(row) += hrow.transpose() * Yq_.cast<cdouble>();
  }
  return out;
}

CMatrix BandLimitedSingleLayer::evaluate_scaled(const std::vector<Vec3>& targets) const {
  const FaddeevFunction fn(zeta_);
  const auto Q = static_cast<Eigen::Index>(quad_.size());
  CMatrix out(static_cast<Eigen::Index>(targets.size()), harmonic_count(L_));
  CVector row(Q);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Vec3& x = targets[t];
    if (x.norm() < 1.5) throw UsageError("scaled evaluation needs targets with |x| >= 1.5");
    // exp(-i x.zeta) G(x - y) = exp(-i y.zeta) g(x - y)
    for (Eigen::Index q = 0; q < Q; ++q) {
      const Vec3& y = quad_.points[q];
      row(q) = quad_.weights[q] * std::exp(-kI * bdot(zeta_, y)) * fn.g(x - y);
    }
    out.row(static_cast<Eigen::Index>(t)) = row.transpose() * Yq_.cast<cdouble>();
  }
  return out;
}

}  // namespace cgoeit
