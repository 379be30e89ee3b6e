#include "cgoeit/inversion.hpp"

#include <cmath>
#include <limits>

#include "cgoeit/interior_solver.hpp"

namespace cgoeit {

long XiGrid::find(const std::array<int, 3>& j) const {
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] == j) return static_cast<long>(i);
  }
  return -1;
}

XiGrid build_xi_grid(double cutoff, double spacing) {
  if (!(spacing > 0.0) || !(cutoff >= 0.0)) throw UsageError("xi grid needs spacing > 0, cutoff >= 0");
  XiGrid g;
  g.spacing = spacing;
  g.cutoff = cutoff;
  const int K = static_cast<int>(std::floor(cutoff / spacing + 1e-12));
  for (int k = -K; k <= K; ++k)
    for (int j = -K; j <= K; ++j)
      for (int i = -K; i <= K; ++i) {
        const Vec3 xi = spacing * Vec3(i, j, k);
        if (xi.norm() > cutoff * (1.0 + 1e-12)) continue;
        g.index.push_back({i, j, k});
        g.points.push_back(xi);
      }
  return g;
}

SpectralField qhat_from_samples(const std::vector<ScatteringSample>& samples, const XiGrid& grid) {
  if (samples.size() != grid.size()) throw UsageError("sample count does not match the xi grid");
  SpectralField out;
  out.grid = grid;
  out.qhat = CVector::Zero(static_cast<Eigen::Index>(grid.size()));
  std::vector<std::size_t> failed;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].ok()) {
      out.qhat(static_cast<Eigen::Index>(i)) = *samples[i].t;
    } else {
      failed.push_back(i);
    }
  }
  static const std::array<std::array<int, 3>, 6> kSteps{
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  for (std::size_t f : failed) {
    cdouble acc = 0.0;
    int count = 0;
    for (const auto& s : kSteps) {
      const auto& j = grid.index[f];
      const long nb = grid.find({j[0] + s[0], j[1] + s[1], j[2] + s[2]});
      if (nb < 0) continue;
      if (!samples[static_cast<std::size_t>(nb)].ok()) {
        throw SweepAbort("adjacent scattering samples failed", failed);
      }
      acc += *samples[static_cast<std::size_t>(nb)].t;
      ++count;
    }
    if (count == 0) throw SweepAbort("failed scattering sample has no neighbours", failed);
    out.qhat(static_cast<Eigen::Index>(f)) = acc / static_cast<double>(count);
    ++out.gaps_filled;
  }
  return out;
}

double hann_taper(double rho, double cutoff) {
  const double start = 0.75 * cutoff;
  if (rho <= start) return 1.0;
  if (rho >= cutoff) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * (rho - start) / (cutoff - start)));
}

PotentialField inverse_fourier(const SpectralField& spectral, const VolumeGrid& grid, bool taper) {
  const int n = grid.n;
  const double dxi3 = std::pow(spectral.grid.spacing, 3);
  const double scale = dxi3 / std::pow(2.0 * kPi, 3);
  CVector acc = CVector::Zero(static_cast<Eigen::Index>(grid.size()));
  std::vector<cdouble> ex(n), ey(n), ez(n);
  for (std::size_t s = 0; s < spectral.grid.size(); ++s) {
    const Vec3& xi = spectral.grid.points[s];
    const double w = taper ? hann_taper(xi.norm(), spectral.grid.cutoff) : 1.0;
    const cdouble c = spectral.qhat(static_cast<Eigen::Index>(s)) * w * scale;
    if (c == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const double x = grid.coord(i);
      ex[i] = std::exp(kI * (x * xi(0)));
      ey[i] = std::exp(kI * (x * xi(1)));
      ez[i] = std::exp(kI * (x * xi(2)));
    }
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        const cdouble cjk = c * ey[j] * ez[k];
        const std::size_t base = grid.index(0, j, k);
        for (int i = 0; i < n; ++i) acc(static_cast<Eigen::Index>(base + i)) += cjk * ex[i];
      }
  }
  PotentialField out;
  out.q = VolumeField(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.point(i).norm() < 1.0) out.q.values(static_cast<Eigen::Index>(i)) = acc(static_cast<Eigen::Index>(i));
  }
  return out;
}

VolumeField gamma_from_q(const PotentialField& q) {
  const InteriorSystem sys = InteriorSystem::schrodinger(q);
  const VolumeField w = sys.solve([](const Vec3&) { return cdouble(1.0); });
  VolumeField gamma(q.grid());
  gamma.values.setOnes();
  for (std::size_t i = 0; i < q.grid().size(); ++i) {
    if (sys.is_unknown(i)) {
      const auto k = static_cast<Eigen::Index>(i);
      gamma.values(k) = w.values(k) * w.values(k);
    }
  }
  return gamma;
}

ErrorMetrics error_metrics(const VolumeField& rec, const VolumeField& truth) {
  const VolumeGrid& g = truth.grid;
  if (rec.grid.n != g.n || rec.grid.pad != g.pad) throw UsageError("error_metrics needs equal grids");
  ErrorMetrics m;
  double dre = 0, dim = 0, nre = 0, nim = 0, nc = 0, wsum = 0;
  double peak = -std::numeric_limits<double>::infinity();
  Vec3 centroid = Vec3::Zero();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.point(i);
    if (x.norm() > 1.0) continue;
    const auto k = static_cast<Eigen::Index>(i);
    const cdouble r = rec.values(k), t = truth.values(k);
    const cdouble d = r - t;
    dre += d.real() * d.real();
    dim += d.imag() * d.imag();
    nre += t.real() * t.real();
    nim += t.imag() * t.imag();
    nc += (t.real() - 1.0) * (t.real() - 1.0);
    m.max_err_re = std::max(m.max_err_re, std::abs(d.real()));
    m.max_err_im = std::max(m.max_err_im, std::abs(d.imag()));
    if (r.imag() > peak) {
      peak = r.imag();
      m.im_peak_rec = x;
    }
    if (t.imag() > 0.0) {
      centroid += t.imag() * x;
      wsum += t.imag();
    }
  }
  auto ratio = [](double a, double b) { return b > 0.0 ? std::sqrt(a / b) : std::sqrt(a); };
  m.rel_l2_re = ratio(dre, nre);
  m.rel_l2_im = ratio(dim, nim);
  m.rel_l2_re_contrast = ratio(dre, nc);
  m.im_center_true = wsum > 0.0 ? Vec3(centroid / wsum) : Vec3::Zero();
  m.im_peak_distance = (m.im_peak_rec - m.im_center_true).norm();
  return m;
}

}  // namespace cgoeit
