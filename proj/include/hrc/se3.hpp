#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace hrc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Rng = std::mt19937_64;

/// Rigid transform: x_world = R * x_local + p.
struct Pose {
  Vec3 p = Vec3::Zero();
  Mat3 R = Mat3::Identity();

  Pose() = default;
  Pose(const Vec3& position, const Mat3& rotation) : p(position), R(rotation) {}

  static Pose identity() { return {}; }
  static Pose translation(const Vec3& t) { return {t, Mat3::Identity()}; }

  Pose operator*(const Pose& other) const { return {R * other.p + p, R * other.R}; }
  Vec3 apply(const Vec3& x) const { return R * x + p; }
  Pose inverse() const { return {-(R.transpose() * p), R.transpose()}; }

  /// ‖RᵀR − I‖ < tol and det(R) > 0.
  bool is_valid(double tol = 1e-9) const;
};

inline Pose compose(const Pose& a, const Pose& b) { return a * b; }
inline Pose inverse(const Pose& a) { return a.inverse(); }

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);
Mat3 axis_angle(const Vec3& axis, double angle);

/// Re-orthonormalize a nearly-orthonormal matrix (nearest rotation via SVD).
Mat3 orthonormalize(const Mat3& R);

/// Geodesic angle of R1ᵀR2, in [0, π]. Extracted through the quaternion so
/// the result stays accurate near π.
double rotation_distance(const Mat3& R1, const Mat3& R2);

/// Random pose with rotation_distance(R, goal.R) < max_rot and
/// ‖p − goal.p‖ < max_trans. Zero bounds return the goal exactly.
Pose sample_pose_near(const Pose& goal, double max_rot, double max_trans, Rng& rng);
Pose sample_pose_near(const Pose& goal, double max_rot, double max_trans, std::uint64_t seed);

/// Unit quaternion in [w, x, y, z] order, w ≥ 0.
Eigen::Vector4d to_wxyz(const Mat3& R);

/// Accepts a quaternion in [w, x, y, z]; throws ParseError when ‖q‖ deviates
/// from 1 by more than tol, otherwise normalizes.
Mat3 from_wxyz(const Eigen::Vector4d& q, double tol = 1e-6);

constexpr double kPi = 3.14159265358979323846;
constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace hrc
