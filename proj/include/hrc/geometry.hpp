#pragma once

#include <array>
#include <span>
#include <vector>

#include "hrc/se3.hpp"

namespace hrc {

/// Oriented bounding box: a box of half-extents `half` in the local frame
/// `frame` (center at frame.p, axes are the columns of frame.R).
struct Obb {
  Pose frame;
  Vec3 half = Vec3::Zero();

  Obb transformed(const Pose& T) const { return {T * frame, half}; }
  std::array<Vec3, 8> corners() const;
};

/// Separating-axis test over the 15 candidate axes. Touching boxes count as
/// intersecting.
bool intersects(const Obb& a, const Obb& b);
bool intersects_any(const Obb& a, std::span<const Obb> others);

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  int euler_characteristic() const;
  /// Every undirected edge shared by exactly two faces and V − E + F = 2.
  bool watertight() const;
};

TriangleMesh box_mesh(const Vec3& half);

}  // namespace hrc
