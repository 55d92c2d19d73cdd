#include "hrc/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "hrc/error.hpp"

namespace hrc {
namespace {

void check_dims(const SerialChain& chain, const JointConfig& q) {
  if (static_cast<std::size_t>(q.size()) != chain.dof()) {
    throw Error(ErrorCode::DimensionMismatch, "chain '" + chain.name + "' has " +
                                                  std::to_string(chain.dof()) + " joints, got " +
                                                  std::to_string(q.size()));
  }
}

Eigen::Matrix<double, 6, 1> pose_error(const Pose& current, const Pose& target) {
  Eigen::Matrix<double, 6, 1> e;
  e.head<3>() = target.p - current.p;
  const Eigen::AngleAxisd aa(Mat3(target.R * current.R.transpose()));
  e.tail<3>() = aa.axis() * aa.angle();
  return e;
}

}  // namespace

bool SerialChain::within_limits(const JointConfig& q, double tol) const {
  if (static_cast<std::size_t>(q.size()) != dof()) return false;
  for (std::size_t i = 0; i < dof(); ++i) {
    if (q[i] < joints[i].lower - tol || q[i] > joints[i].upper + tol) return false;
  }
  return true;
}

JointConfig SerialChain::clamp(const JointConfig& q) const {
  JointConfig out = q;
  for (std::size_t i = 0; i < dof(); ++i) out[i] = std::clamp(q[i], joints[i].lower, joints[i].upper);
  return out;
}

JointConfig SerialChain::lower_limits() const {
  JointConfig out(dof());
  for (std::size_t i = 0; i < dof(); ++i) out[i] = joints[i].lower;
  return out;
}

JointConfig SerialChain::upper_limits() const {
  JointConfig out(dof());
  for (std::size_t i = 0; i < dof(); ++i) out[i] = joints[i].upper;
  return out;
}

double SerialChain::reach() const {
  double r = flange_to_tcp.p.norm();
  for (std::size_t i = 1; i < joints.size(); ++i) r += joints[i].origin.p.norm();
  return r;
}

void SerialChain::finalize() {
  if (joints.empty() || joints.size() > 10) {
    throw Error(ErrorCode::InvariantViolation,
                "chain '" + name + "' must have 1..10 joints, has " + std::to_string(joints.size()));
  }
  for (auto& j : joints) {
    if (!(j.lower < j.upper)) {
      throw Error(ErrorCode::InvariantViolation, "joint '" + j.name + "' has lower >= upper");
    }
    if (j.axis.norm() < 1e-9) {
      throw Error(ErrorCode::InvariantViolation, "joint '" + j.name + "' has a zero axis");
    }
    j.axis.normalize();
  }
  home = forward_kinematics(*this, JointConfig::Zero(static_cast<Eigen::Index>(dof())));
}

std::vector<Pose> joint_frames(const SerialChain& chain, const JointConfig& q) {
  check_dims(chain, q);
  std::vector<Pose> frames;
  frames.reserve(chain.dof() + 1);
  Pose T = chain.base;
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const Joint& j = chain.joints[i];
    T = T * j.origin;
    T.R = T.R * Eigen::AngleAxisd(q[i], j.axis).toRotationMatrix();
    frames.push_back(T);
  }
  frames.push_back(T * chain.flange_to_tcp);
  return frames;
}

Pose forward_kinematics(const SerialChain& chain, const JointConfig& q) {
  return joint_frames(chain, q).back();
}

Jacobian jacobian(const SerialChain& chain, const JointConfig& q) {
  const auto frames = joint_frames(chain, q);
  const Vec3 tcp = frames.back().p;
  Jacobian J(6, static_cast<Eigen::Index>(chain.dof()));
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const Vec3 z = frames[i].R * chain.joints[i].axis;
    J.block<3, 1>(0, i) = z.cross(tcp - frames[i].p);
    J.block<3, 1>(3, i) = z;
  }
  return J;
}

std::vector<Obb> link_volumes(const SerialChain& chain, const JointConfig& q) {
  const auto frames = joint_frames(chain, q);
  std::vector<Obb> out;
  for (const auto& b : chain.base_proxies) out.push_back(b.transformed(chain.base));
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    for (const auto& b : chain.joints[i].proxies) out.push_back(b.transformed(frames[i]));
  }
  for (const auto& b : chain.tool_proxies) out.push_back(b.transformed(frames.back()));
  return out;
}

namespace {

// Full-turn joints wrap into their range instead of sticking at a limit.
JointConfig project(const SerialChain& chain, JointConfig q) {
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const Joint& j = chain.joints[i];
    double& qi = q[static_cast<Eigen::Index>(i)];
    if (j.upper - j.lower >= 2.0 * kPi - 1e-12 && (qi < j.lower || qi > j.upper)) {
      qi = j.lower + std::fmod(std::fmod(qi - j.lower, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
    }
    qi = std::clamp(qi, j.lower, j.upper);
  }
  return q;
}

}  // namespace

IkResult inverse_kinematics(const SerialChain& chain, const Pose& target, const JointConfig& seed,
                            const IkOptions& opt) {
  check_dims(chain, seed);
  IkResult result;
  result.q = chain.clamp(seed);

  const Vec3 shoulder = (chain.base * chain.joints.front().origin).p;
  if ((target.p - shoulder).norm() > chain.reach() + 1e-9) {
    result.status = IkStatus::Unreachable;
    result.position_error = (forward_kinematics(chain, result.q).p - target.p).norm();
    return result;
  }

  // Iterate to well inside the acceptance tolerances so the reported
  // solution is stable under re-evaluation.
  const double pos_goal = opt.position_tolerance * 1e-2;
  const double rot_goal = opt.rotation_tolerance * 1e-2;
  const double lambda2 = opt.damping * opt.damping;
  const auto n = static_cast<Eigen::Index>(chain.dof());
  double checkpoint = std::numeric_limits<double>::infinity();

  for (int it = 0;; ++it) {
    const Pose current = forward_kinematics(chain, result.q);
    const auto e = pose_error(current, target);
    result.position_error = e.head<3>().norm();
    result.rotation_error = e.tail<3>().norm();
    result.iterations = it;
    if (result.position_error < pos_goal && result.rotation_error < rot_goal) break;
    if (it >= opt.max_iterations) break;
    // Stop early once the error has stalled in a local minimum.
    if (it % opt.stall_window == 0) {
      const double err = result.position_error + result.rotation_error;
      if (err > (1.0 - opt.stall_ratio) * checkpoint) break;
      checkpoint = err;
    }

    const Jacobian J = jacobian(chain, result.q);
    const Eigen::Matrix<double, 6, 6> A =
        J * J.transpose() + lambda2 * Eigen::Matrix<double, 6, 6>::Identity();
    Eigen::VectorXd dq = J.transpose() * A.ldlt().solve(e);
    const double peak = dq.cwiseAbs().maxCoeff();
    if (peak > opt.step_clamp) dq *= opt.step_clamp / peak;
    if (dq.size() != n) break;
    result.q = project(chain, result.q + dq);
  }

  if (result.position_error <= opt.position_tolerance &&
      result.rotation_error <= opt.rotation_tolerance) {
    result.status = IkStatus::Converged;
    return result;
  }
  bool pinned = false;
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const double qi = result.q[static_cast<Eigen::Index>(i)];
    if (qi <= chain.joints[i].lower + 1e-9 || qi >= chain.joints[i].upper - 1e-9) pinned = true;
  }
  result.status = pinned ? IkStatus::OutOfLimits : IkStatus::Unreachable;
  return result;
}

IkResult inverse_kinematics_multi(const SerialChain& chain, const Pose& target,
                                  const std::vector<JointConfig>& seeds, const IkOptions& options) {
  IkResult last;
  last.q = JointConfig::Zero(static_cast<Eigen::Index>(chain.dof()));
  auto attempt = [&](const JointConfig& s) {
    last = inverse_kinematics(chain, target, s, options);
    return last.ok();
  };
  for (const auto& s : seeds) {
    if (attempt(s)) return last;
    if (last.status == IkStatus::Unreachable && last.iterations == 0) return last;
  }
  for (const auto& s : chain.ik_seeds) {
    if (attempt(s)) return last;
    if (last.status == IkStatus::Unreachable && last.iterations == 0) return last;
  }
  return last;
}

std::vector<double> singular_values(const Eigen::MatrixXd& J) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace hrc
