#pragma once

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Geometry>

#include "hrc/geometry.hpp"
#include "hrc/json_io.hpp"
#include "hrc/kinematics.hpp"
#include "hrc/scene.hpp"

namespace hrc::test {

inline std::string data_path(const std::string& name) { return std::string(HRC_DATA_DIR) + "/" + name; }

inline SerialChain load_ur3() { return read_chain(read_json_file(data_path("ur3.json")), "ur3"); }

inline SerialChain human_left_arm() { return build_human_arms(HumanBodySpec{}, Pose()).first; }

/// z-revolute joint at the base, TCP 1 m along x.
inline SerialChain one_link(double lower = -kPi, double upper = kPi) {
  SerialChain c;
  c.name = "one";
  Joint j;
  j.name = "j0";
  j.lower = lower;
  j.upper = upper;
  c.joints.push_back(j);
  c.flange_to_tcp = Pose::translation(Vec3(1.0, 0.0, 0.0));
  c.finalize();
  return c;
}

/// Planar 2R arm in the xy-plane with unit links.
inline SerialChain planar_two_link() {
  SerialChain c;
  c.name = "planar";
  Joint a, b;
  a.name = "a";
  b.name = "b";
  b.origin = Pose::translation(Vec3(1.0, 0.0, 0.0));
  c.joints = {a, b};
  c.flange_to_tcp = Pose::translation(Vec3(1.0, 0.0, 0.0));
  c.finalize();
  return c;
}

inline JointConfig random_config(const SerialChain& chain, std::mt19937_64& rng, double shrink = 0.0) {
  JointConfig q(static_cast<Eigen::Index>(chain.dof()));
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const double lo = chain.joints[i].lower + shrink, hi = chain.joints[i].upper - shrink;
    q[static_cast<Eigen::Index>(i)] = std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  return q;
}

inline Eigen::Matrix4d homogeneous(const Pose& T) {
  Eigen::Matrix4d H = Eigen::Matrix4d::Identity();
  H.topLeftCorner<3, 3>() = T.R;
  H.topRightCorner<3, 1>() = T.p;
  return H;
}

/// Geodesic angle through Eigen's angle-axis conversion.
inline double angle_between(const Mat3& A, const Mat3& B) {
  return Eigen::AngleAxisd(Mat3(A.transpose() * B)).angle();
}

/// Slab test of the segment ab against the solid box.
inline bool segment_hits_box(const Vec3& a, const Vec3& b, const Obb& box) {
  const Vec3 la = box.frame.inverse().apply(a), lb = box.frame.inverse().apply(b);
  const Vec3 d = lb - la;
  double t0 = 0.0, t1 = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-15) {
      if (std::abs(la[i]) > box.half[i]) return false;
      continue;
    }
    double u = (-box.half[i] - la[i]) / d[i], v = (box.half[i] - la[i]) / d[i];
    if (u > v) std::swap(u, v);
    t0 = std::max(t0, u);
    t1 = std::min(t1, v);
    if (t0 > t1) return false;
  }
  return true;
}

/// Mesh-based overlap oracle: two convex solids meet iff a triangle edge of
/// one touches the other solid.
inline bool meshes_overlap(const Obb& a, const Obb& b) {
  auto edge_hit = [](const Obb& x, const Obb& y) {
    const TriangleMesh m = box_mesh(x.half);
    for (const auto& f : m.faces) {
      for (int k = 0; k < 3; ++k) {
        const Vec3 p = x.frame.apply(m.vertices[static_cast<std::size_t>(f[k])]);
        const Vec3 q = x.frame.apply(m.vertices[static_cast<std::size_t>(f[(k + 1) % 3])]);
        if (segment_hits_box(p, q, y)) return true;
      }
    }
    return false;
  };
  return edge_hit(a, b) || edge_hit(b, a);
}

}  // namespace hrc::test
