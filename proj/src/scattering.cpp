#include "cgoeit/scattering.hpp"

#include <cmath>

namespace cgoeit {

double FrequencyPair::nullity_defect() const {
  const double n2 = zeta.squaredNorm();
  return n2 > 0.0 ? std::abs(bdot(zeta, zeta)) / n2 : 0.0;
}

double FrequencyPair::membership_defect() const {
  const double scale = xi.squaredNorm() + zeta.norm() * xi.norm();
  if (scale == 0.0) return 0.0;
  return std::abs(xi.squaredNorm() + 2.0 * bdot(zeta, xi)) / scale;
}

FrequencyPair zeta_frame(const Vec3& xi, double a, int frame_seed) {
  const double xn = xi.norm();
  if (xn == 0.0) throw UsageError("zeta_frame needs xi != 0");
  if (!(a >= 0.0)) throw UsageError("zeta_frame needs a >= 0");
  const Vec3 u = xi / xn;
  Vec3 e2 = Vec3::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    const Vec3 e = Vec3::Unit(axis);
    if (std::abs(e.dot(u)) < 1.0 - 1e-12) {
      e2 = (e - e.dot(u) * u).normalized();
      break;
    }
  }
  Vec3 e3 = u.cross(e2);
  if (frame_seed != 0) {
    const double phi = frame_seed * kPi / 3.0;
    const Vec3 r2 = std::cos(phi) * e2 + std::sin(phi) * e3;
    e3 = -std::sin(phi) * e2 + std::cos(phi) * e3;
    e2 = r2;
  }
  FrequencyPair p;
  p.xi = xi;
  p.a = a;
  p.e2 = e2;
  p.e3 = e3;
  const double b = std::sqrt(a * a + 0.25 * xn * xn);
  p.zeta = (-0.5 * xi + a * e2).cast<cdouble>() + kI * (b * e3).cast<cdouble>();
  return p;
}

FrequencyPair zeta_frame_origin(double zeta_norm) {
  FrequencyPair p;
  const double c = zeta_norm / std::sqrt(2.0);
  p.a = c;
  p.e2 = Vec3::UnitX();
  p.e3 = Vec3::UnitY();
  p.zeta = (c * Vec3::UnitX()).cast<cdouble>() + kI * (c * Vec3::UnitY()).cast<cdouble>();
  return p;
}

double frame_magnitude(const Vec3& xi, double zeta_norm) {
  const double a2 = 0.5 * (zeta_norm * zeta_norm - 0.5 * xi.squaredNorm());
  return a2 > 0.0 ? std::sqrt(a2) : 0.0;
}

std::string to_string(ScatterMethod m) {
  switch (m) {
    case ScatterMethod::Boundary: return "boundary";
    case ScatterMethod::Volume: return "volume";
    case ScatterMethod::Texp: return "texp";
  }
  return "boundary";
}

ScatterMethod scatter_method_from_string(const std::string& name) {
  if (name == "boundary") return ScatterMethod::Boundary;
  if (name == "volume") return ScatterMethod::Volume;
  if (name == "texp") return ScatterMethod::Texp;
  throw UsageError("unknown scattering method '" + name + "'");
}

namespace {

CMatrix basis_difference(const BoundaryOperator& a, const BoundaryOperator& b) {
  if (a.rep != Representation::Basis || b.rep != Representation::Basis) {
    throw UsageError("scattering transform needs basis-rep DtN matrices");
  }
  if (a.dim() != b.dim()) throw UsageError("DtN matrices differ in size");
  return a.matrix - b.matrix;
}

int degree_of(Eigen::Index nb) {
  const int L = static_cast<int>(std::lround(std::sqrt(static_cast<double>(nb)))) - 1;
  if (harmonic_count(L) != nb) throw UsageError("DtN size is not (L+1)^2");
  return L;
}

CVector test_coefficients(const FrequencyPair& pair, int L) {
  return harmonic_exponential_coefficients(-(pair.zeta + pair.xi.cast<cdouble>()), L);
}

}  // namespace

ScatteringSample scattering_transform_boundary(const CMatrix& delta_lambda,
                                               const BandLimitedSingleLayer& S,
                                               const FrequencyPair& pair) {
  ScatteringSample out;
  out.pair = pair;
  out.method = ScatterMethod::Boundary;
  out.degree = S.degree();
  out.quadrature_points = static_cast<int>(S.quadrature().size());
  const BieSolution sol = solve_bie_bandlimited(S, delta_lambda);
  out.condition = sol.condition;
  out.status = sol.status;
  if (!sol.ok) return out;
  const CVector d = test_coefficients(pair, S.degree());
  const cdouble t = sol.density.transpose() * d;
  if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) {
    out.status = "non-finite value";
    return out;
  }
  out.t = t;
  return out;
}

ScatteringSample scattering_transform_boundary(const BoundaryOperator& lambda_q,
                                               const BoundaryOperator& lambda_0,
                                               const FrequencyPair& pair) {
  const CMatrix D = basis_difference(lambda_q, lambda_0);
  const BandLimitedSingleLayer S(pair.zeta, degree_of(D.rows()));
  return scattering_transform_boundary(D, S, pair);
}

ScatteringSample scattering_transform_texp(const BoundaryOperator& lambda_gamma,
                                           const BoundaryOperator& lambda_1,
                                           const FrequencyPair& pair) {
  const CMatrix D = basis_difference(lambda_gamma, lambda_1);
  const int L = degree_of(D.rows());
  ScatteringSample out;
  out.pair = pair;
  out.method = ScatterMethod::Texp;
  out.degree = L;
  const CVector c = harmonic_exponential_coefficients(pair.zeta, L);
  out.t = cdouble((c.transpose() * D * test_coefficients(pair, L))(0));
  return out;
}

cdouble fourier_volume(const PotentialField& q, const Vec3& xi) {
  const VolumeGrid& g = q.grid();
  cdouble acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cdouble v = q.q.values(static_cast<Eigen::Index>(i));
    if (v == 0.0) continue;
    acc += std::exp(-kI * xi.dot(g.point(i))) * v;
  }
  return acc * g.cell_volume();
}

ScatteringSample scattering_transform_volume(const PotentialField& q, const FrequencyPair& pair,
                                             const KrylovOptions& opts) {
  ScatteringSample out;
  out.pair = pair;
  out.method = ScatterMethod::Volume;
  const FaddeevKernel kernel = faddeev_gzeta(q.grid(), ComplexFrequency(pair.zeta));
  out.quadrature_points = kernel.quadrature_nodes;
  const LsSolution ls = lippmann_schwinger_solve(q, kernel, opts);
  out.status = ls.status;
  if (!ls.converged) return out;
  const VolumeGrid& g = q.grid();
  cdouble acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (q.q.values(k) == 0.0) continue;
    acc += std::exp(-kI * pair.xi.dot(g.point(i))) * q.q.values(k) * (1.0 + ls.phi.values(k));
  }
  out.t = acc * g.cell_volume();
  return out;
}

double SweepPolicy::zeta_norm(const Vec3& xi) const {
  return std::max(zeta_min, kappa * xi.norm());
}

std::vector<ScatteringSample> scattering_sweep(const BoundaryOperator& lambda_q,
                                               const BoundaryOperator& lambda_0,
                                               const std::vector<Vec3>& xis,
                                               const SweepPolicy& policy) {
  std::vector<ScatteringSample> out;
  out.reserve(xis.size());
  if (policy.method == ScatterMethod::Volume) {
    throw UsageError("the volume route needs q, not DtN data");
  }
  const CMatrix D = basis_difference(lambda_q, lambda_0);
  const int L = degree_of(D.rows());
  for (const Vec3& xi : xis) {
    const double zn = policy.zeta_norm(xi);
    const FrequencyPair pair = xi.norm() == 0.0
                                   ? zeta_frame_origin(zn)
                                   : zeta_frame(xi, frame_magnitude(xi, zn), policy.frame_seed);
    if (policy.method == ScatterMethod::Texp) {
      out.push_back(scattering_transform_texp(lambda_q, lambda_0, pair));
      continue;
    }
    try {
      const BandLimitedSingleLayer S(pair.zeta, L);
      out.push_back(scattering_transform_boundary(D, S, pair));
    } catch (const Error& e) {
      ScatteringSample bad;
      bad.pair = pair;
      bad.status = e.what();
      out.push_back(bad);
    }
  }
  return out;
}

}  // namespace cgoeit
