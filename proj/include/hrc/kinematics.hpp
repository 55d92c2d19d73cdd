#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hrc/geometry.hpp"
#include "hrc/se3.hpp"

namespace hrc {

using JointConfig = Eigen::VectorXd;
using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

/// Revolute joint. `origin` places the joint frame in its parent's frame at
/// q = 0; the joint rotates about `axis` (joint frame). Collision proxies are
/// expressed in the frame after the joint rotation.
struct Joint {
  std::string name;
  Pose origin;
  Vec3 axis = Vec3::UnitZ();
  double lower = -kPi;
  double upper = kPi;
  std::vector<Obb> proxies;
};

struct SerialChain {
  std::string name;
  Pose base;
  std::vector<Obb> base_proxies;
  std::vector<Joint> joints;
  Pose flange_to_tcp;
  std::vector<Obb> tool_proxies;  ///< in the TCP frame
  std::vector<JointConfig> ik_seeds;
  Pose home;  ///< FK at q = 0, filled by finalize()

  std::size_t dof() const { return joints.size(); }
  bool within_limits(const JointConfig& q, double tol = 1e-9) const;
  JointConfig clamp(const JointConfig& q) const;
  JointConfig lower_limits() const;
  JointConfig upper_limits() const;
  /// Upper bound on the TCP distance from the first joint's origin.
  double reach() const;

  /// Checks invariants (1..10 joints, lower < upper, unit axes) and caches
  /// the home pose. Throws InvariantViolation.
  void finalize();
};

/// World frames after each joint rotation, followed by the TCP frame.
std::vector<Pose> joint_frames(const SerialChain& chain, const JointConfig& q);
Pose forward_kinematics(const SerialChain& chain, const JointConfig& q);

/// Geometric Jacobian at the TCP: rows 0-2 linear, rows 3-5 angular.
Jacobian jacobian(const SerialChain& chain, const JointConfig& q);

/// All collision proxies of the chain placed in the world at q.
std::vector<Obb> link_volumes(const SerialChain& chain, const JointConfig& q);

struct IkOptions {
  double damping = 0.01;
  double step_clamp = 0.2;
  int max_iterations = 300;
  double position_tolerance = 1e-4;
  double rotation_tolerance = 1e-3;
  int stall_window = 25;      ///< iterations between progress checks
  double stall_ratio = 0.02;  ///< minimum relative error decrease per window
};

enum class IkStatus { Converged, Unreachable, OutOfLimits };

struct IkResult {
  IkStatus status = IkStatus::Unreachable;
  JointConfig q;
  int iterations = 0;
  double position_error = 0.0;
  double rotation_error = 0.0;

  bool ok() const { return status == IkStatus::Converged; }
};

/// Damped least squares with per-step projection onto the joint limits.
IkResult inverse_kinematics(const SerialChain& chain, const Pose& target, const JointConfig& seed,
                            const IkOptions& options = {});

/// Tries `seeds` in order (then the chain's own seeds) and returns the first
/// converged solution, or the last failure.
IkResult inverse_kinematics_multi(const SerialChain& chain, const Pose& target,
                                  const std::vector<JointConfig>& seeds,
                                  const IkOptions& options = {});

/// Singular values, non-increasing.
std::vector<double> singular_values(const Eigen::MatrixXd& J);

}  // namespace hrc
