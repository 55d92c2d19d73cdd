#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hrc/grasping.hpp"

namespace hrc {

/// Inverse condition number σ_min/σ_max of a Jacobian; 0 when σ_max = 0.
double comfort_from_jacobian(const Eigen::MatrixXd& J);

/// Arm Jacobian with the linear rows divided by half the arm's reach, so that
/// both row blocks are per radian and the conditioning does not depend on
/// the size of the arm.
Eigen::MatrixXd normalized_jacobian(const SerialChain& arm, const JointConfig& q);

/// Comfort of a human arm configuration, in [0, 1]: conditioning of the
/// reach-normalized Jacobian.
double comfort_score(const SerialChain& human_arm, const JointConfig& q);

struct ComfortScore {
  double value = 0.0;
  GraspCandidate grasp;
  JointConfig human_config;
};

struct GoalPoseCandidate {
  Pose pose;
  ComfortScore best_score;
  std::vector<ComfortScore> all_scores;
  std::size_t source_index = 0;  ///< position in the input pose list
};

/// Left and right human arms plus the hand and pad parameters shared by both.
struct HumanModel {
  SerialChain left;
  SerialChain right;
  SoftFingerParams pad{0.8, 5e-3, 1e3, 0.01, 0.05};
  double grip_force = 25.0;
  double max_opening = 0.12;
  double grasp_spacing = 0.05;
};

struct GoalSamplingStats {
  std::size_t attempts = 0;
  std::size_t rejected_rotation = 0;
  std::size_t rejected_translation = 0;
  std::size_t rejected_collision = 0;

  std::size_t rejected() const { return rejected_rotation + rejected_translation + rejected_collision; }
};

struct GoalSamplingBounds {
  double max_rotation = deg2rad(45.0);
  double max_translation = 0.5;
};

/// Rejection sampling of board poses near the assembly goal that stay clear
/// of the finished assembly. At most 10·n attempts in total; throws
/// SamplingExhausted when fewer than n poses are accepted.
std::vector<Pose> sample_goal_poses(const BoardSpec& board, const Pose& assembly_goal,
                                    std::span<const Obb> finished, std::size_t n, std::uint64_t seed,
                                    GoalSamplingStats* stats = nullptr,
                                    const GoalSamplingBounds& bounds = {});

/// Scores every feasible, stable human grasp at `pose` over both arms.
/// Scores are in grasp-candidate order, left arm first.
std::vector<ComfortScore> score_pose(const BoardSpec& board, const Pose& pose, const HumanModel& human,
                                     std::span<const Obb> obstacles);

/// Scores each pose, drops poses without a feasible stable grasp and sorts
/// the rest by their best score, descending (stable).
std::vector<GoalPoseCandidate> rank_goal_poses(const BoardSpec& board, std::span<const Pose> poses,
                                               const HumanModel& human, std::span<const Obb> obstacles);

}  // namespace hrc
