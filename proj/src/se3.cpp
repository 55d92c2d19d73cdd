#include "hrc/se3.hpp"

#include <cmath>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "hrc/error.hpp"

namespace hrc {

bool Pose::is_valid(double tol) const {
  if (!p.allFinite() || !R.allFinite()) return false;
  return (R.transpose() * R - Mat3::Identity()).norm() < tol && R.determinant() > 0.0;
}

Mat3 rot_x(double a) { return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix(); }
Mat3 rot_y(double a) { return Eigen::AngleAxisd(a, Vec3::UnitY()).toRotationMatrix(); }
Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

Mat3 axis_angle(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Mat3 orthonormalize(const Mat3& R) {
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0) {
    Mat3 U = svd.matrixU();
    U.col(2) *= -1.0;
    out = U * svd.matrixV().transpose();
  }
  return out;
}

double rotation_distance(const Mat3& R1, const Mat3& R2) {
  const Eigen::Quaterniond q(Mat3(R1.transpose() * R2));
  const double v = q.vec().norm();
  return 2.0 * std::atan2(v, std::abs(q.w()));
}

Pose sample_pose_near(const Pose& goal, double max_rot, double max_trans, Rng& rng) {
  if (max_rot < 0.0 || max_rot > kPi || max_trans < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "sample_pose_near bounds out of range");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Mat3 R = goal.R;
  if (max_rot > 0.0) {
    for (;;) {
      Vec3 axis(gauss(rng), gauss(rng), gauss(rng));
      if (axis.norm() < 1e-12) continue;
      const double angle = unit(rng) * max_rot;
      R = goal.R * axis_angle(axis, angle);
      if (rotation_distance(R, goal.R) < max_rot) break;
    }
  }

  Vec3 p = goal.p;
  if (max_trans > 0.0) {
    for (;;) {
      Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
      if (dir.norm() < 1e-12) continue;
      const double radius = max_trans * std::cbrt(unit(rng));
      p = goal.p + radius * dir.normalized();
      if ((p - goal.p).norm() < max_trans) break;
    }
  }
  return {p, R};
}

Pose sample_pose_near(const Pose& goal, double max_rot, double max_trans, std::uint64_t seed) {
  Rng rng(seed);
  return sample_pose_near(goal, max_rot, max_trans, rng);
}

Eigen::Vector4d to_wxyz(const Mat3& R) {
  Eigen::Quaterniond q(R);
  q.normalize();
  if (q.w() < 0) q.coeffs() *= -1.0;
  return {q.w(), q.x(), q.y(), q.z()};
}

Mat3 from_wxyz(const Eigen::Vector4d& q, double tol) {
  const double n = q.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
    throw Error(ErrorCode::ParseError, "quaternion norm " + std::to_string(n) + " is not unit");
  }
  Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
  quat.normalize();
  return quat.toRotationMatrix();
}

}  // namespace hrc
