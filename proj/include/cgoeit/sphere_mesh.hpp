#pragma once

#include <array>
#include <vector>

#include "cgoeit/common.hpp"

namespace cgoeit {

/// Quadrature discretization of the unit sphere by a subdivided icosahedron.
///
/// Nodes are sorted lexicographically (x, then y, then z). Each node carries
/// one third of the spherical-triangle area of every face touching it, so the
/// weights sum to 4*pi up to rounding.
struct BoundaryMesh {
  static constexpr int kMaxLevel = 6;

  int level = 0;
  std::vector<Vec3> nodes;
  std::vector<Vec3> normals;
  std::vector<double> weights;
  std::vector<std::array<int, 3>> faces;

  std::size_t size() const { return nodes.size(); }
  /// Mean edge length; the mesh spacing used for tolerances.
  double spacing() const;
  double total_weight() const;
  Eigen::Map<const RVector> weight_vector() const {
    return {weights.data(), static_cast<Eigen::Index>(weights.size())};
  }
};

BoundaryMesh build_sphere_mesh(int level);

/// Area of the spherical triangle with unit-vector corners a, b, c.
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace cgoeit
