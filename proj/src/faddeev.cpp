#include "cgoeit/faddeev.hpp"

#include <algorithm>
#include <cmath>

#include <fftw3.h>

namespace cgoeit {

ComplexFrequency::ComplexFrequency(const CVec3& z) : zeta(z) { validate(); }

void ComplexFrequency::validate() const {
  const double n2 = zeta.squaredNorm();
  if (!std::isfinite(n2)) throw UsageError("frequency has non-finite components");
  if (std::abs(bdot(zeta, zeta)) > 1e-12 * std::max(n2, 1e-300) && n2 > 0.0) {
    throw UsageError("frequency violates zeta.zeta = 0");
  }
}

namespace {

// Beyond this value of s x_m the exponentially small tail form is used for R.
constexpr double kTailSwitch = 4.0;
constexpr int kMaxNodes = 20000;

// phi(z) = (exp(s z) - 1) / z and its derivative, entire in z.
inline cdouble phi(double s, cdouble z) {
  const cdouble w = s * z;
  if (std::abs(w) < 0.5) {
    cdouble term = 1.0, sum = 0.0;
    for (int n = 0; n < 18; ++n) {
      term /= static_cast<double>(n + 1);
      sum += term;
      term *= w;
    }
    return s * sum;
  }
  return (std::exp(w) - 1.0) / z;
}

inline cdouble dphi(double s, cdouble z) {
  const cdouble w = s * z;
  if (std::abs(w) < 0.5) {
    // s^2 sum_m (m+1) w^m / (m+2)!
    cdouble sum = 0.0, wp = 1.0;
    double fact = 2.0;
    for (int m = 0; m < 18; ++m) {
      sum += (m + 1.0) * wp / fact;
      wp *= w;
      fact *= (m + 3.0);
    }
    return s * s * sum;
  }
  const cdouble e = std::exp(w);
  return (w * e - e + 1.0) / (z * z);
}

int smooth_nodes(double s, double r) {
  return std::min(kMaxNodes, 24 + static_cast<int>(std::ceil(0.8 * s * r)));
}

}  // namespace

FaddeevFunction::FaddeevFunction(const CVec3& zeta) : zeta_(zeta) {
  ComplexFrequency(zeta).validate();
  k_ = zeta.real();
  const Vec3 m = zeta.imag();
  s_ = m.norm();
  if (s_ > 0.0) mhat_ = m / s_;
}

void FaddeevFunction::coords(const Vec3& x, double& xm, double& r, Vec3& rhat) const {
  xm = x.dot(mhat_);
  const Vec3 perp = x - xm * mhat_;
  r = perp.norm();
  rhat = r > 0.0 ? Vec3(perp / r) : Vec3::Zero();
}

cdouble FaddeevFunction::F(double xm, double r) const {
  if (s_ == 0.0) return 0.0;
  const int M = smooth_nodes(s_, r);
  max_nodes_ = std::max(max_nodes_, M);
  cdouble acc = 0.0;
  for (int j = 0; j <= M; ++j) {
    const double c = std::cos(kPi * j / M);
    const cdouble v = phi(s_, cdouble(-xm, r * c));
    acc += (j == 0 || j == M) ? 0.5 * v : v;
  }
  return acc / static_cast<double>(M);
}

cdouble FaddeevFunction::H(const Vec3& x) const {
  double xm, r;
  Vec3 rhat;
  coords(x, xm, r, rhat);
  return -F(xm, r) / (4.0 * kPi);
}

CVec3 FaddeevFunction::grad_H(const Vec3& x) const {
  if (s_ == 0.0) return CVec3::Zero();
  double xm, r;
  Vec3 rhat;
  coords(x, xm, r, rhat);
  const int M = smooth_nodes(s_, r);
  max_nodes_ = std::max(max_nodes_, M);
  cdouble along_r = 0.0, along_m = 0.0;
  for (int j = 0; j <= M; ++j) {
    const double c = std::cos(kPi * j / M);
    const cdouble d = dphi(s_, cdouble(-xm, r * c));
    const double w = (j == 0 || j == M) ? 0.5 : 1.0;
    along_r += w * d * kI * c;
    along_m -= w * d;
  }
  const double scale = -1.0 / (4.0 * kPi * M);
  return scale * (along_r * rhat.cast<cdouble>() + along_m * mhat_.cast<cdouble>());
}

cdouble FaddeevFunction::G(const Vec3& x) const {
  return 1.0 / (4.0 * kPi * x.norm()) + H(x);
}

double FaddeevFunction::R(const Vec3& x) const {
  double xm, r;
  Vec3 rhat;
  coords(x, xm, r, rhat);
  if (xm <= 0.0) {
    // exp(s x_m) F with the scaling moved inside the integral so that large
    // negative x_m cannot overflow.
    const int M = smooth_nodes(s_, r);
    max_nodes_ = std::max(max_nodes_, M);
    const double e = std::exp(s_ * xm);
    double acc = 0.0;
    for (int j = 0; j <= M; ++j) {
      const double c = std::cos(kPi * j / M);
      const cdouble z(-xm, r * c);
      const cdouble v = std::abs(s_ * z) < 0.5
                            ? e * phi(s_, z)
                            : (std::exp(cdouble(0.0, s_ * r * c)) - e) / z;
      acc += ((j == 0 || j == M) ? 0.5 : 1.0) * v.real();
    }
    return (e / x.norm() - acc / M) / (4.0 * kPi);
  }
  if (s_ * xm <= kTailSwitch) {
    return (std::exp(s_ * xm) * (1.0 / x.norm() - F(xm, r))).real() / (4.0 * kPi);
  }
  if (r == 0.0) return 1.0 / (4.0 * kPi * xm);
  // Poles of 1/(x_m - i r cos t) sit asinh(x_m/r) off the real axis.
  const double eta = std::asinh(xm / r);
  const int M = std::min(
      kMaxNodes, std::max(smooth_nodes(s_, r),
                          static_cast<int>(std::ceil((s_ * xm + 35.0) / (2.0 * eta)))));
  max_nodes_ = std::max(max_nodes_, M);
  double acc = 0.0;
  for (int j = 0; j <= M; ++j) {
    const double c = std::cos(kPi * j / M);
    const cdouble v = std::exp(cdouble(0.0, s_ * r * c)) / cdouble(xm, -r * c);
    acc += ((j == 0 || j == M) ? 0.5 : 1.0) * v.real();
  }
  return acc / (4.0 * kPi * M);
}

cdouble FaddeevFunction::g(const Vec3& x) const {
  return std::exp(cdouble(0.0, -k_.dot(x))) * R(x);
}

cdouble FaddeevFunction::g_origin_cell(double h) const {
  return kCubeInverseDistance / (4.0 * kPi * h) - s_ / (4.0 * kPi);
}

FaddeevKernel faddeev_gzeta(const VolumeGrid& base, const ComplexFrequency& zeta) {
  zeta.validate();
  FaddeevKernel K;
  K.zeta = zeta;
  K.base = base;
  const int n = base.n;
  K.grid = VolumeGrid(2 * n - 1, 1.0 + 2.0 * base.pad);
  const double h = base.spacing();
  const FaddeevFunction fn(zeta.zeta);
  K.g = VolumeField(K.grid);
  const int c = n - 1;  // index of the zero offset
  for (int k = 0; k < K.grid.n; ++k)
    for (int j = 0; j < K.grid.n; ++j)
      for (int i = 0; i < K.grid.n; ++i) {
        const Vec3 d((i - c) * h, (j - c) * h, (k - c) * h);
        K.g(i, j, k) = (i == c && j == c && k == c) ? fn.g_origin_cell(h) : fn.g(d);
      }
  K.quadrature_nodes = fn.max_nodes();

  // Circular embedding: offset d goes to index d mod N.
  const int N = 2 * n;
  const std::size_t total = static_cast<std::size_t>(N) * N * N;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * total, 0.0);
  const double vol = base.cell_volume();
  for (int k = 0; k < K.grid.n; ++k)
    for (int j = 0; j < K.grid.n; ++j)
      for (int i = 0; i < K.grid.n; ++i) {
        const int a = (i - c + N) % N, b = (j - c + N) % N, e = (k - c + N) % N;
        const std::size_t idx = (static_cast<std::size_t>(e) * N + b) * N + a;
        const cdouble v = vol * K.g(i, j, k);
        buf[idx][0] = v.real();
        buf[idx][1] = v.imag();
      }
  fftw_plan plan = fftw_plan_dft_3d(N, N, N, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  auto spec = std::make_shared<std::vector<cdouble>>(total);
  for (std::size_t t = 0; t < total; ++t) (*spec)[t] = cdouble(buf[t][0], buf[t][1]);
  fftw_free(buf);
  K.spectrum = std::move(spec);
  return K;
}

VolumeField harmonic_remainder(const FaddeevKernel& kernel) {
  const FaddeevFunction fn(kernel.zeta.zeta);
  return VolumeField(kernel.grid, [&](const Vec3& x) { return fn.H(x); });
}

VolumeField convolve_gzeta(const FaddeevKernel& kernel, const VolumeField& f) {
  const VolumeGrid& base = kernel.base;
  if (f.grid.n != base.n || f.grid.pad != base.pad) {
    throw UsageError("convolution input is not on the kernel's base grid");
  }
  const double h = base.spacing();
  for (std::size_t idx = 0; idx < base.size(); ++idx) {
    if (f.values(idx) != cdouble(0.0) && base.point(idx).norm() > 1.0 + 1e-12 * h) {
      throw UsageError("convolution input must vanish outside the unit ball");
    }
  }
  const int n = base.n, N = 2 * n;
  const std::size_t total = static_cast<std::size_t>(N) * N * N;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * total, 0.0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = (static_cast<std::size_t>(k) * N + j) * N + i;
        const cdouble v = f(i, j, k);
        buf[idx][0] = v.real();
        buf[idx][1] = v.imag();
      }
  fftw_plan fwd = fftw_plan_dft_3d(N, N, N, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_3d(N, N, N, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(fwd);
  const auto& spec = *kernel.spectrum;
  for (std::size_t t = 0; t < total; ++t) {
    const cdouble v = cdouble(buf[t][0], buf[t][1]) * spec[t];
    buf[t][0] = v.real();
    buf[t][1] = v.imag();
  }
  fftw_execute(bwd);
  VolumeField out(base);
  const double inv = 1.0 / static_cast<double>(total);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = (static_cast<std::size_t>(k) * N + j) * N + i;
        out(i, j, k) = cdouble(buf[idx][0], buf[idx][1]) * inv;
      }
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(buf);
  return out;
}

}  // namespace cgoeit
