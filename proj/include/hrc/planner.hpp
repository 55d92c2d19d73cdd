#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrc/grasping.hpp"
#include "hrc/slip.hpp"

namespace hrc {

/// Bound on the end-effector inclination. With a zero `com_dir_tcp` the
/// inclination is the angle between the opening direction and gravity,
/// folded into [0, π/2]. With a CoM direction it is the gravity-torque
/// inclination asin|ĝ · R(n × ĉ)|, which equals the former whenever the
/// contact-to-CoM direction is horizontal and only differs when the lever
/// tilts out of the horizontal plane.
struct InclinationConstraint {
  double limit = kPi / 2.0;
  Vec3 opening_tcp = Vec3::UnitY();
  Vec3 com_dir_tcp = Vec3::Zero();

  bool torque_aware() const { return com_dir_tcp.norm() > 0.5; }
};

double inclination_of_rotation(const Mat3& R_tcp, const InclinationConstraint& c);
/// Opening direction (TCP y) against gravity, folded into [0, π/2].
double inclination_of(const SerialChain& chain, const JointConfig& q);
double inclination_of(const SerialChain& chain, const JointConfig& q, const InclinationConstraint& c);

/// Board rigidly attached to the TCP for collision purposes.
struct AttachedObject {
  std::string board_id;
  GraspCandidate grasp;
  Obb in_tcp;
};

AttachedObject attach_board(const BoardSpec& board, const GraspCandidate& grasp);

struct PlanningScene {
  std::vector<Obb> obstacles;
};

struct MotionPlan {
  std::string arm;
  std::vector<JointConfig> waypoints;
  InclinationConstraint constraint;
  std::optional<AttachedObject> attached;
};

struct PlannerOptions {
  std::uint64_t seed = 0;
  double budget_s = 30.0;
  double edge_step = 0.02;
  double extend_step = 0.3;
  int shortcut_attempts = 200;
  double max_waypoint_step = 0.05;
  std::size_t max_samples = 200000;
  /// Interior samples and edges are held this far inside the inclination
  /// bound so that finer re-validation of the returned path stays in bounds.
  double constraint_margin = 0.005;
};

struct PlanStats {
  std::size_t samples = 0;
  std::size_t rejected_constraint = 0;
  std::size_t rejected_collision = 0;
  std::size_t tree_nodes = 0;
  double seconds = 0.0;
};

/// Joint-space validity: limits, inclination and collisions of the arm and
/// of the attached board.
class StateValidator {
 public:
  StateValidator(const SerialChain& chain, const InclinationConstraint& constraint,
                 const PlanningScene& scene, const std::optional<AttachedObject>& attached);

  bool limits_ok(const JointConfig& q) const;
  bool constraint_ok(const JointConfig& q) const;
  bool collision_free(const JointConfig& q) const;
  bool valid(const JointConfig& q) const;
  /// Checks interpolants at ∞-norm spacing ≤ step, endpoints included.
  bool edge_valid(const JointConfig& a, const JointConfig& b, double step) const;

 private:
  const SerialChain& chain_;
  InclinationConstraint constraint_;
  const PlanningScene& scene_;
  const std::optional<AttachedObject>& attached_;
};

/// Bidirectional sampling-tree search in joint space. Samples violating the
/// inclination bound or colliding are discarded. Throws InvalidEndpoint or
/// PlanningFailed.
MotionPlan plan_constrained(const SerialChain& chain, const JointConfig& start, const JointConfig& goal,
                            const InclinationConstraint& constraint, const PlanningScene& scene,
                            const std::optional<AttachedObject>& attached, const PlannerOptions& options,
                            PlanStats* stats = nullptr);

struct TransferSetup {
  double ee_length = 0.20;
  SoftFingerParams pad;
  double grip_force = 40.0;
  SlipCache* cache = nullptr;
};

/// Slip-limited transfer of a held board between two object poses. The
/// returned plan's constraint carries the relaxation limit of the grasp.
MotionPlan plan_object_transfer(const SerialChain& arm, const BoardSpec& board, const GraspCandidate& grasp,
                                const Pose& start_pose, const Pose& goal_pose, const PlanningScene& scene,
                                const TransferSetup& setup, const PlannerOptions& options,
                                PlanStats* stats = nullptr);

/// Same, with the IK solutions at both ends supplied by the caller.
MotionPlan plan_object_transfer(const SerialChain& arm, const BoardSpec& board, const GraspCandidate& grasp,
                                const JointConfig& start_q, const JointConfig& goal_q,
                                const PlanningScene& scene, const TransferSetup& setup,
                                const PlannerOptions& options, PlanStats* stats = nullptr);

/// Constraint for a grasp: relaxation limit plus the CoM lever direction.
InclinationConstraint transfer_constraint(const BoardSpec& board, const GraspCandidate& grasp,
                                          const TransferSetup& setup);

struct ValidationReport {
  bool limits_ok = true;
  bool constraint_ok = true;
  bool collision_ok = true;
  /// Path parameter (segment index + fraction) of the first violation.
  std::optional<double> first_limit_violation;
  std::optional<double> first_constraint_violation;
  std::optional<double> first_collision;
  std::size_t states_checked = 0;
  double max_inclination = 0.0;

  bool ok() const { return limits_ok && constraint_ok && collision_ok; }
};

/// Re-checks every interpolant at `resolution` (∞-norm, radians).
ValidationReport validate_plan(const MotionPlan& plan, const SerialChain& chain, const PlanningScene& scene,
                               double resolution = 0.01, double inclination_tolerance = 1e-6);

/// Arc timestamps under a constant joint speed (∞-norm).
std::vector<double> plan_timestamps(const MotionPlan& plan, double joint_speed);

}  // namespace hrc
