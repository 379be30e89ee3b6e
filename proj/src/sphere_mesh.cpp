#include "cgoeit/sphere_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

namespace cgoeit {

namespace {

std::vector<Vec3> icosahedron_vertices() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  return v;
}

std::vector<std::array<int, 3>> icosahedron_faces() {
  return {{0, 11, 5}, {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
          {1, 5, 9},  {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
          {3, 9, 4},  {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
          {4, 9, 5},  {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
}

}  // namespace

double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  // Van Oosterom-Strackee solid angle formula.
  const double num = std::abs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

BoundaryMesh build_sphere_mesh(int level) {
  if (level < 0 || level > BoundaryMesh::kMaxLevel) {
    throw UsageError("sphere mesh level must be in [0, " +
                     std::to_string(BoundaryMesh::kMaxLevel) + "]");
  }
  std::vector<Vec3> verts = icosahedron_vertices();
  std::vector<std::array<int, 3>> faces = icosahedron_faces();

  for (int it = 0; it < level; ++it) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto found = midpoint.find(key);
      if (found != midpoint.end()) return found->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  // Deterministic lexicographic node order.
  std::vector<int> order(verts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return std::lexicographical_compare(verts[i].data(), verts[i].data() + 3,
                                        verts[j].data(), verts[j].data() + 3);
  });
  std::vector<int> new_index(verts.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_index[order[k]] = static_cast<int>(k);

  BoundaryMesh mesh;
  mesh.level = level;
  mesh.nodes.resize(verts.size());
  for (std::size_t k = 0; k < order.size(); ++k) mesh.nodes[k] = verts[order[k]];
  mesh.normals = mesh.nodes;
  mesh.faces.reserve(faces.size());
  for (const auto& f : faces) {
    mesh.faces.push_back({new_index[f[0]], new_index[f[1]], new_index[f[2]]});
  }
  mesh.weights.assign(mesh.nodes.size(), 0.0);
  for (const auto& f : mesh.faces) {
    const double area = spherical_triangle_area(mesh.nodes[f[0]], mesh.nodes[f[1]],
                                                mesh.nodes[f[2]]);
    for (int v : f) mesh.weights[v] += area / 3.0;
  }
  return mesh;
}

double BoundaryMesh::spacing() const {
  double total = 0.0;
  for (const auto& f : faces) {
    total += (nodes[f[0]] - nodes[f[1]]).norm() + (nodes[f[1]] - nodes[f[2]]).norm() +
             (nodes[f[2]] - nodes[f[0]]).norm();
  }
  return faces.empty() ? 0.0 : total / (3.0 * static_cast<double>(faces.size()));
}

double BoundaryMesh::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

}  // namespace cgoeit
