#include "cgoeit/volume_grid.hpp"

#include <algorithm>
#include <cmath>

namespace cgoeit {

VolumeGrid::VolumeGrid(int n_, double pad_) : n(n_), pad(pad_) {
  if (n < 16) throw UsageError("volume grid needs at least 16 samples per axis");
  if (pad < 0.0) throw UsageError("volume grid pad must be non-negative");
}

Vec3 VolumeGrid::point(std::size_t idx) const {
  const auto nn = static_cast<std::size_t>(n);
  const int i = static_cast<int>(idx % nn);
  const int j = static_cast<int>((idx / nn) % nn);
  const int k = static_cast<int>(idx / (nn * nn));
  return point(i, j, k);
}

VolumeField::VolumeField(const VolumeGrid& g, const std::function<cdouble(const Vec3&)>& f)
    : grid(g), values(g.size()) {
  for (std::size_t idx = 0; idx < g.size(); ++idx) values(idx) = f(g.point(idx));
}

cdouble VolumeField::interpolate(const Vec3& x) const {
  const double h = grid.spacing();
  int base[3];
  double frac[3];
  for (int d = 0; d < 3; ++d) {
    double s = (x(d) - grid.lower()) / h;
    s = std::clamp(s, 0.0, grid.n - 1.0 - 1e-12);
    base[d] = static_cast<int>(std::floor(s));
    frac[d] = s - base[d];
  }
  cdouble acc = 0.0;
  for (int c = 0; c < 8; ++c) {
    const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
    const double w = (di ? frac[0] : 1 - frac[0]) * (dj ? frac[1] : 1 - frac[1]) *
                     (dk ? frac[2] : 1 - frac[2]);
    if (w == 0.0) continue;
    acc += w * (*this)(base[0] + di, base[1] + dj, base[2] + dk);
  }
  return acc;
}

double ball_l2_norm(const VolumeField& f) {
  double acc = 0.0;
  for (std::size_t idx = 0; idx < f.grid.size(); ++idx) {
    if (f.grid.point(idx).norm() <= 1.0) acc += std::norm(f.values(idx));
  }
  return std::sqrt(acc * f.grid.cell_volume());
}

}  // namespace cgoeit
