#include "hrc/comfort.hpp"

#include <algorithm>

#include "hrc/error.hpp"

namespace hrc {

double comfort_from_jacobian(const Eigen::MatrixXd& J) {
  const auto s = singular_values(J);
  if (s.empty() || s.front() <= 0.0) return 0.0;
  // A wide Jacobian has min(rows, cols) singular values; a tall one is
  // rank-deficient in the task space, which the smallest value reports.
  return std::clamp(s.back() / s.front(), 0.0, 1.0);
}

Eigen::MatrixXd normalized_jacobian(const SerialChain& arm, const JointConfig& q) {
  Eigen::MatrixXd J = jacobian(arm, q);
  const double L = arm.reach() / 2.0;
  if (L > 0.0) J.topRows(3) /= L;
  return J;
}

double comfort_score(const SerialChain& human_arm, const JointConfig& q) {
  return comfort_from_jacobian(normalized_jacobian(human_arm, q));
}

std::vector<Pose> sample_goal_poses(const BoardSpec& board, const Pose& goal, std::span<const Obb> finished,
                                    std::size_t n, std::uint64_t seed, GoalSamplingStats* stats,
                                    const GoalSamplingBounds& bounds) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  Rng rng(seed);
  GoalSamplingStats local;
  std::vector<Pose> out;
  out.reserve(n);
  const std::size_t budget = 10 * n;
  while (out.size() < n && local.attempts < budget) {
    ++local.attempts;
    const Pose s = sample_pose_near(goal, bounds.max_rotation, bounds.max_translation, rng);
    if (!(rotation_distance(s.R, goal.R) < bounds.max_rotation) && bounds.max_rotation > 0.0) {
      ++local.rejected_rotation;
      continue;
    }
    if (!((s.p - goal.p).norm() < bounds.max_translation) && bounds.max_translation > 0.0) {
      ++local.rejected_translation;
      continue;
    }
    if (intersects_any(board.box_at(s), finished)) {
      ++local.rejected_collision;
      continue;
    }
    out.push_back(s);
  }
  if (stats != nullptr) *stats = local;
  if (out.size() < n) {
    throw Error(ErrorCode::SamplingExhausted, "accepted " + std::to_string(out.size()) + " of " +
                                                  std::to_string(n) + " goal poses within " +
                                                  std::to_string(budget) + " attempts");
  }
  return out;
}

std::vector<ComfortScore> score_pose(const BoardSpec& board, const Pose& pose, const HumanModel& human,
                                     std::span<const Obb> obstacles) {
  std::vector<ComfortScore> scores;
  const struct {
    const SerialChain* chain;
    Owner owner;
  } arms[2] = {{&human.left, Owner::HumanLeft}, {&human.right, Owner::HumanRight}};

  for (const auto& arm : arms) {
    const auto candidates = generate_candidates(board, arm.owner, human.max_opening, human.grasp_spacing);
    std::vector<GraspCandidate> stable;
    for (const auto& g : candidates.grasps) {
      if (check_human_grasp_stability(g, board, pose, human.pad, human.grip_force)) stable.push_back(g);
    }
    const GraspSet set = feasible_grasps(board, pose, stable, *arm.chain, obstacles);
    for (const auto& e : set.grasps) {
      scores.push_back({comfort_score(*arm.chain, e.q), e.grasp, e.q});
    }
  }
  return scores;
}

std::vector<GoalPoseCandidate> rank_goal_poses(const BoardSpec& board, std::span<const Pose> poses,
                                               const HumanModel& human, std::span<const Obb> obstacles) {
  std::vector<GoalPoseCandidate> out;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    auto scores = score_pose(board, poses[i], human, obstacles);
    if (scores.empty()) continue;
    GoalPoseCandidate c;
    c.pose = poses[i];
    c.source_index = i;
    c.best_score = *std::max_element(scores.begin(), scores.end(),
                                     [](const auto& a, const auto& b) { return a.value < b.value; });
    c.all_scores = std::move(scores);
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.best_score.value > b.best_score.value;
  });
  return out;
}

}  // namespace hrc
