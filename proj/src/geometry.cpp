#include "hrc/geometry.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace hrc {

std::array<Vec3, 8> Obb::corners() const {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    const Vec3 s((i & 1) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 4) ? 1.0 : -1.0);
    out[i] = frame.apply(s.cwiseProduct(half));
  }
  return out;
}

bool intersects(const Obb& a, const Obb& b) {
  // Gottschalk-style SAT, expressed in a's frame.
  const Mat3 R = a.frame.R.transpose() * b.frame.R;
  const Vec3 t = a.frame.R.transpose() * (b.frame.p - a.frame.p);
  constexpr double eps = 1e-12;
  Mat3 absR = R.cwiseAbs().array() + eps;
  const Vec3& ea = a.half;
  const Vec3& eb = b.half;

  for (int i = 0; i < 3; ++i) {
    if (std::abs(t[i]) > ea[i] + eb.dot(absR.row(i))) return false;
  }
  for (int j = 0; j < 3; ++j) {
    if (std::abs(t.dot(R.col(j))) > ea.dot(absR.col(j)) + eb[j]) return false;
  }
  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    for (int j = 0; j < 3; ++j) {
      const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      const double ra = ea[i1] * absR(i2, j) + ea[i2] * absR(i1, j);
      const double rb = eb[j1] * absR(i, j2) + eb[j2] * absR(i, j1);
      const double d = std::abs(t[i2] * R(i1, j) - t[i1] * R(i2, j));
      if (d > ra + rb) return false;
    }
  }
  return true;
}

bool intersects_any(const Obb& a, std::span<const Obb> others) {
  for (const auto& o : others) {
    if (intersects(a, o)) return true;
  }
  return false;
}

int TriangleMesh::euler_characteristic() const {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& f : faces) {
    for (int k = 0; k < 3; ++k) {
      int u = f[k], v = f[(k + 1) % 3];
      if (u > v) std::swap(u, v);
      ++edges[{u, v}];
    }
  }
  return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(faces.size());
}

bool TriangleMesh::watertight() const {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& f : faces) {
    for (int k = 0; k < 3; ++k) {
      int u = f[k], v = f[(k + 1) % 3];
      if (u > v) std::swap(u, v);
      ++edges[{u, v}];
    }
  }
  for (const auto& [e, n] : edges) {
    if (n != 2) return false;
  }
  return euler_characteristic() == 2;
}

TriangleMesh box_mesh(const Vec3& half) {
  TriangleMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.emplace_back((i & 1) ? half.x() : -half.x(), (i & 2) ? half.y() : -half.y(),
                            (i & 4) ? half.z() : -half.z());
  }
  // Outward-facing quads split into two triangles each.
  const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                           {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    m.faces.push_back({q[0], q[1], q[2]});
    m.faces.push_back({q[0], q[2], q[3]});
  }
  return m;
}

}  // namespace hrc
