#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cgoeit/common.hpp"
#include "cgoeit/phantom.hpp"
#include "cgoeit/scattering.hpp"
#include "cgoeit/volume_grid.hpp"

namespace cgoeit {

/// More failed samples than the gap filler may repair.
class SweepAbort : public Error {
 public:
  SweepAbort(const std::string& what, std::vector<std::size_t> failed)
      : Error(what), failed_(std::move(failed)) {}
  const std::vector<std::size_t>& failed() const { return failed_; }

 private:
  std::vector<std::size_t> failed_;
};

/// Cartesian frequencies j * spacing with |xi| <= cutoff, in lexicographic
/// order of (j_z, j_y, j_x).
struct XiGrid {
  double spacing = 0.0;
  double cutoff = 0.0;
  std::vector<std::array<int, 3>> index;
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  /// Position of an integer index, or -1.
  long find(const std::array<int, 3>& j) const;
};

XiGrid build_xi_grid(double cutoff, double spacing);
/// Spacing matched to a volume box of side 2(1 + pad).
inline double default_xi_spacing(double pad) { return kPi / (1.0 + pad); }

struct SpectralField {
  XiGrid grid;
  CVector qhat;
  int gaps_filled = 0;
};

/// q^(xi) := t(xi, zeta(xi)). A failed sample whose six grid neighbours that
/// exist are all valid is replaced by their mean; anything else throws
/// SweepAbort.
SpectralField qhat_from_samples(const std::vector<ScatteringSample>& samples, const XiGrid& grid);

/// Hann taper: 1 below 3/4 of the cutoff, cosine roll-off to 0 at the cutoff.
double hann_taper(double rho, double cutoff);

/// q(x) = (2 pi)^-3 sum q^(xi) exp(i x.xi) taper(|xi|) dxi^3 inside the unit
/// ball, 0 outside.
PotentialField inverse_fourier(const SpectralField& spectral, const VolumeGrid& grid,
                               bool taper = true);

/// Solve (-Laplace + q) w = 0 with w = 1 on the sphere; gamma = w^2 inside
/// the ball and 1 outside.
VolumeField gamma_from_q(const PotentialField& q);

struct ErrorMetrics {
  double rel_l2_re = 0.0;          // |Re(rec - true)| / |Re true|
  double rel_l2_im = 0.0;          // |Im(rec - true)| / |Im true|
  double rel_l2_re_contrast = 0.0; // |Re(rec - true)| / |Re true - 1|
  double max_err_re = 0.0;
  double max_err_im = 0.0;
  Vec3 im_peak_rec = Vec3::Zero();
  Vec3 im_center_true = Vec3::Zero();
  double im_peak_distance = 0.0;
};

/// Norms over grid nodes in the closed unit ball. The true Im centre is the
/// Im-weighted centroid of the positive part of Im gamma_true.
ErrorMetrics error_metrics(const VolumeField& gamma_rec, const VolumeField& gamma_true);

}  // namespace cgoeit
