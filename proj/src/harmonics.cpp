#include "cgoeit/harmonics.hpp"

#include <array>
#include <cmath>

namespace cgoeit {

int harmonic_degree(int idx) {
  return static_cast<int>(std::floor(std::sqrt(static_cast<double>(idx)) + 1e-9));
}

void solid_harmonics(int L, const Vec3& x, RVector& values, RMatrix& grads) {
  const int n = harmonic_count(L);
  values.setZero(n);
  grads.setZero(n, 3);
  const double r2 = x.squaredNorm();
  const double z = x(2);
  const Vec3 ez(0, 0, 1);

  // Powers w^m = (x + i y)^m and their gradients.
  std::vector<cdouble> wpow(L + 1);
  std::vector<std::array<cdouble, 3>> wgrad(L + 1);
  const cdouble w(x(0), x(1));
  wpow[0] = 1.0;
  wgrad[0] = {0.0, 0.0, 0.0};
  for (int m = 1; m <= L; ++m) {
    wpow[m] = wpow[m - 1] * w;
    const cdouble d = static_cast<double>(m) * wpow[m - 1];
    wgrad[m] = {d, kI * d, 0.0};
  }

  double qmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= L; ++m) {
    if (m > 0) qmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    // Q_l^m for l = m..L, with gradients.
    double q_prev2 = 0.0, q_prev = qmm;
    Vec3 g_prev2 = Vec3::Zero(), g_prev = Vec3::Zero();
    for (int l = m; l <= L; ++l) {
      double q;
      Vec3 g;
      if (l == m) {
        q = qmm;
        g.setZero();
      } else if (l == m + 1) {
        const double a = std::sqrt(2.0 * m + 3.0);
        q = a * z * q_prev;
        g = a * (ez * q_prev + z * g_prev);
      } else {
        const double ll = l, mm = m;
        const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
        const double b =
            std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
        q = a * (z * q_prev - b * r2 * q_prev2);
        g = a * (ez * q_prev + z * g_prev - b * (2.0 * x * q_prev2 + r2 * g_prev2));
      }
      if (l != m) {
        q_prev2 = q_prev;
        g_prev2 = g_prev;
        q_prev = q;
        g_prev = g;
      }
      if (m == 0) {
        const int idx = harmonic_index(l, 0);
        values(idx) = q;
        grads.row(idx) = g.transpose();
      } else {
        const double s2 = std::sqrt(2.0);
        const int ic = harmonic_index(l, m);
        const int is = harmonic_index(l, -m);
        values(ic) = s2 * q * wpow[m].real();
        values(is) = s2 * q * wpow[m].imag();
        for (int k = 0; k < 3; ++k) {
          grads(ic, k) = s2 * (g(k) * wpow[m].real() + q * wgrad[m][k].real());
          grads(is, k) = s2 * (g(k) * wpow[m].imag() + q * wgrad[m][k].imag());
        }
      }
    }
  }
}

RVector real_sph_harm(int L, const Vec3& x) {
  RVector values;
  RMatrix grads;
  solid_harmonics(L, x.normalized(), values, grads);
  return values;
}

std::vector<int> HarmonicBasis::degrees() const {
  std::vector<int> d(size());
  for (int k = 0; k < size(); ++k) d[k] = harmonic_degree(k);
  return d;
}

CVector HarmonicBasis::project(const BoundaryMesh& mesh, const CVector& nodal) const {
  const CVector weighted = nodal.cwiseProduct(mesh.weight_vector().cast<cdouble>());
  return values.transpose().cast<cdouble>() * weighted;
}

CVector HarmonicBasis::synthesize(const CVector& coeffs) const {
  return values.cast<cdouble>() * coeffs;
}

double gram_tolerance(int level, int L) {
  // Vertex quadrature is second order in the mesh spacing; the defect grows
  // with the square of the resolved degree. Constant fitted with margin on
  // levels 1..5, L <= 12.
  const double h = 1.1 / std::pow(2.0, level);
  const double lh = (L + 1.0) * h;
  return std::max(1e-12, 0.05 * lh * lh);
}

HarmonicBasis build_harmonic_basis(const BoundaryMesh& mesh, int L) {
  if (L < 0) throw UsageError("harmonic degree must be >= 0");
  const auto n = static_cast<int>(mesh.size());
  if (2 * harmonic_count(L) > n) {
    throw UsageError("harmonic degree " + std::to_string(L) +
                     " not resolvable on mesh with " + std::to_string(n) + " nodes");
  }
  HarmonicBasis basis;
  basis.degree_max = L;
  basis.values.resize(n, harmonic_count(L));
  for (int i = 0; i < n; ++i) basis.values.row(i) = real_sph_harm(L, mesh.nodes[i]).transpose();
  const RMatrix gram =
      basis.values.transpose() * mesh.weight_vector().asDiagonal() * basis.values;
  basis.gram_defect =
      (gram - RMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  basis.gram_tolerance = gram_tolerance(mesh.level, L);
  return basis;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n == 1) {
    nodes[0] = 0.0;
    weights[0] = 2.0;
  }
}

SphereQuadrature build_sphere_quadrature(int exact_degree) {
  const int n_theta = exact_degree / 2 + 1;
  const int n_phi = exact_degree + 1;
  std::vector<double> z, wz;
  gauss_legendre(n_theta, z, wz);
  SphereQuadrature q;
  q.exact_degree = exact_degree;
  q.points.reserve(n_theta * n_phi);
  q.weights.reserve(n_theta * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double st = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * kPi * (j + 0.5) / n_phi;
      q.points.emplace_back(st * std::cos(phi), st * std::sin(phi), z[i]);
      q.weights.push_back(wz[i] * 2.0 * kPi / n_phi);
    }
  }
  return q;
}

RMatrix SphereQuadrature::basis(int L) const {
  RMatrix Y(points.size(), harmonic_count(L));
  for (std::size_t i = 0; i < points.size(); ++i) {
    Y.row(static_cast<Eigen::Index>(i)) = real_sph_harm(L, points[i]).transpose();
  }
  return Y;
}

CVector harmonic_exponential_coefficients(const CVec3& kappa, int L) {
  const SphereQuadrature quad = build_sphere_quadrature(2 * L + 1);
  const RMatrix Y = quad.basis(L);
  CVector coeffs = CVector::Zero(harmonic_count(L));
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const cdouble ikx = kI * bdot(kappa, quad.points[q]);
    cdouble term = 1.0;
    for (int l = 0; l <= L; ++l) {
      if (l > 0) term *= ikx / static_cast<double>(l);
      for (int m = -l; m <= l; ++m) {
        const int idx = harmonic_index(l, m);
        coeffs(idx) += quad.weights[q] * term * Y(static_cast<Eigen::Index>(q), idx);
      }
    }
  }
  return coeffs;
}

}  // namespace cgoeit
