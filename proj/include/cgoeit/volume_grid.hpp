#pragma once

#include <functional>
#include <vector>

#include "cgoeit/common.hpp"

namespace cgoeit {

/// Regular n^3 grid on the box [-1-pad, 1+pad]^3, x-fastest ordering.
struct VolumeGrid {
  int n = 0;
  double pad = 0.0;

  VolumeGrid() = default;
  VolumeGrid(int n_, double pad_);

  double lower() const { return -1.0 - pad; }
  double spacing() const { return 2.0 * (1.0 + pad) / (n - 1); }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * n + j) * n + i;
  }
  double coord(int i) const { return lower() + i * spacing(); }
  Vec3 point(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }
  Vec3 point(std::size_t idx) const;
  double cell_volume() const {
    const double h = spacing();
    return h * h * h;
  }
};

/// Complex samples on a VolumeGrid.
struct VolumeField {
  VolumeGrid grid;
  CVector values;

  VolumeField() = default;
  explicit VolumeField(const VolumeGrid& g) : grid(g), values(CVector::Zero(g.size())) {}
  VolumeField(const VolumeGrid& g, const std::function<cdouble(const Vec3&)>& f);

  cdouble& operator()(int i, int j, int k) { return values(grid.index(i, j, k)); }
  cdouble operator()(int i, int j, int k) const { return values(grid.index(i, j, k)); }
  /// Trilinear interpolation; points outside the box are clamped.
  cdouble interpolate(const Vec3& x) const;
};

/// Discrete L2 norm over grid points in the closed unit ball.
double ball_l2_norm(const VolumeField& f);

}  // namespace cgoeit
