#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hrc/comfort.hpp"
#include "hrc/json_io.hpp"
#include "hrc/planner.hpp"

namespace hrc {

struct GripperSpec {
  double max_opening = 0.085;
  double ee_length = 0.20;
  SoftFingerParams pad{0.8, 2e-3, 5e5, 0.015, 0.05};
  double grip_force = 40.0;
};

struct RobotArm {
  SerialChain chain;
  JointConfig home;  ///< parked configuration when the arm is idle
};

/// Parametric upper-body model; each arm is a 7-joint chain
/// (shoulder yaw/pitch/roll, elbow, wrist roll/pitch/yaw). Limits are given
/// for the left arm and mirrored for the right.
struct HumanBodySpec {
  double shoulder_half_width = 0.185;
  double upper_arm = 0.285;
  double forearm = 0.250;
  double hand = 0.080;
  std::array<std::pair<double, double>, 7> limits{{{-1.0, 1.6},
                                                   {-1.2, 1.7},
                                                   {-1.5, 1.5},
                                                   {0.0, 2.6},
                                                   {-1.5, 1.5},
                                                   {-1.2, 1.2},
                                                   {-0.6, 0.6}}};
  Obb torso{Pose::translation(Vec3(-0.12, 0.0, -0.25)), Vec3(0.12, 0.2, 0.5)};  ///< stance frame
};

struct HumanSpec {
  HumanBodySpec body;
  Pose stance;  ///< shoulder-line midpoint; x faces forward, z up
  HumanModel model;
};

/// Builds the left and right arm chains of a human standing at `stance`.
std::pair<SerialChain, SerialChain> build_human_arms(const HumanBodySpec& body, const Pose& stance);

struct SuctionToolSpec {
  double length = 0.15;
  double radius = 0.015;
  Pose initial_pose;
  std::vector<double> yaw_samples{0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0};
};

struct BoardPlacement {
  BoardSpec spec;
  Pose initial;
  Pose target;
};

/// Candidate robot-robot handover poses: board face-up at each position and
/// yaw, plus the board's initial pose.
struct HandoverGrid {
  std::vector<Vec3> positions;
  std::vector<double> yaws;
  Vec3 workspace_center = Vec3::Zero();
};

struct PlannerConfig {
  std::uint64_t seed = 7;
  double budget_s = 30.0;
  double comfort_threshold = 0.15;
  std::size_t goal_samples = 200;
  double grasp_spacing = 0.05;
  double w_rot = 0.1;
  double joint_speed = 0.5;
  std::size_t max_transfer_attempts = 12;  ///< candidate (pose, grasp) pairs tried per board
  double attempt_budget_s = 5.0;           ///< planner budget per attempt inside the pipeline
};

struct Scene {
  RobotArm receiving;  ///< gripper arm that carries boards to the human
  RobotArm suction;    ///< arm holding the suction tool
  GripperSpec gripper;
  HumanSpec human;
  SuctionToolSpec tool;
  std::vector<BoardPlacement> boards;
  std::vector<std::string> sequence;  ///< assembly order of board ids
  std::vector<Obb> workspace;         ///< table and fixtures
  std::vector<std::string> finished;  ///< board ids already at their targets
  HandoverGrid rr_grid;
  PlannerConfig config;

  const BoardPlacement& board(const std::string& id) const;
  std::vector<Obb> finished_boxes() const;
  /// Obstacles for the receiving arm: workspace, finished boards, the human
  /// torso and the parked suction arm.
  PlanningScene robot_scene() const;
  /// Same obstacle set as a flat list, used for grasp feasibility.
  std::vector<Obb> robot_grasp_obstacles() const;
  std::vector<Obb> human_obstacles() const;
  TransferSetup transfer_setup(SlipCache* cache = nullptr) const;

  /// Scene invariants: unique ids, valid boards, sequence is a permutation,
  /// initial poses do not interpenetrate. Throws InvariantViolation.
  void validate() const;
};

/// Reads a scene file. Chain and human-body entries may be file names
/// (resolved against the scene's directory) or inline records; omitted
/// optional parameters take the defaults above. The result is validated.
Scene load_scene(const std::string& path);
Scene scene_from_json(const Json& j, const std::string& base_dir);
/// Self-contained serialization (chains and body written inline).
Json scene_to_json(const Scene& scene);
void save_scene(const Scene& scene, const std::string& path);

HumanBodySpec read_human_body(const Json& j, const std::string& path);
Json to_json(const HumanBodySpec& body);
SoftFingerParams read_pad(const Json& j, const std::string& path, const SoftFingerParams& defaults);
Json to_json(const SoftFingerParams& pad);
Json to_json(const BoardSpec& board);

}  // namespace hrc
