#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrc/scene.hpp"

namespace hrc {

/// Suction tool fixed at the board's upward face above the CoM, held by the
/// suction arm's gripper.
struct SuctionAttach {
  Pose tcp_in_object;  ///< gripper TCP holding the tool, in the board frame
  double yaw = 0.0;    ///< tool rotation about its own axis
  JointConfig q;       ///< suction-arm configuration
};

struct RrHandover {
  Pose pose;
  SuctionAttach attach;
  GraspSet receiving;           ///< receiving-arm grasps feasible at `pose`
  double center_distance = 0.0;  ///< to the bimanual workspace center
};

/// Tool-holding TCP pose for a given tool yaw, in the board frame.
Pose suction_tcp_in_object(const BoardSpec& board, const Pose& board_pose, double tool_length, double yaw);

/// Suction-arm IK over the tool yaw samples; nullopt when unreachable or
/// when the arm would hit the workspace.
std::optional<SuctionAttach> suction_attach(const Scene& scene, const BoardSpec& board, const Pose& pose);

/// Candidate robot-robot handover poses in search order (initial pose first).
std::vector<Pose> rr_candidate_poses(const Scene& scene, const Pose& init_pose);

/// Evaluates one candidate; nullopt when the suction arm cannot hold the
/// board there or the receiving arm has no feasible grasp.
std::optional<RrHandover> evaluate_rr_candidate(const Scene& scene, const BoardSpec& board, const Pose& pose);

/// Maximizes the receiving arm's grasp count over the candidate grid, ties
/// broken by workspace-center proximity. Throws NoBimanualPose.
RrHandover select_rr_handover_pose(const Scene& scene, const std::string& board_id, const Pose& init_pose);

struct ComfortablePose {
  Pose pose;
  ComfortScore best;
  std::size_t source_index = 0;
};

/// Poses whose best feasible, stable human grasp scores above threshold.
std::vector<ComfortablePose> filter_comfortable(std::span<const Pose> candidates, const BoardSpec& board,
                                                const HumanModel& human, std::span<const Obb> obstacles,
                                                double threshold);

struct HandoverCandidate {
  Pose pose;
  ComfortScore comfort;
  std::vector<GraspCandidate> shared;
  GraspSet robot_set;  ///< receiving-arm solutions at `pose` for the shared grasps
  double quality = 0.0;
  std::size_t source_index = 0;
};

/// Members of S that share at least one receiving-arm grasp with the
/// robot-robot handover set.
std::vector<HandoverCandidate> filter_shared(std::span<const ComfortablePose> comfortable, const GraspSet& rr_set,
                                             const BoardSpec& board, const SerialChain& receiving_arm,
                                             std::span<const Obb> obstacles);
std::vector<HandoverCandidate> filter_shared(std::span<const ComfortablePose> comfortable, const Pose& rr_pose,
                                             const BoardSpec& board, const SerialChain& receiving_arm,
                                             double max_opening, double spacing, std::span<const Obb> obstacles);

/// Translation distance plus w_rot times the geodesic rotation distance.
double handover_quality(const Pose& candidate, const Pose& target, double w_rot);

/// Sorts ascending by handover_quality (stable). Throws NoHandoverPose.
std::vector<HandoverCandidate> select_handover_pose(std::vector<HandoverCandidate> candidates,
                                                    const Pose& assembly_pose, double w_rot);

enum class StepKind { SuctionPick, RobotRobotTransfer, ConstrainedMove, HumanRelease };
const char* to_string(StepKind kind);
StepKind step_kind_from_string(const std::string& s);

struct HandoverPlanStep {
  StepKind kind = StepKind::SuctionPick;
  std::string actor;
  std::string object;
  Pose start;
  Pose end;
  std::optional<GraspCandidate> grasp;
  std::optional<SuctionAttach> suction;
  JointConfig actor_q;  ///< actor configuration at the end of the step
  std::optional<MotionPlan> motion;
};

struct TransferAttempt {
  std::size_t candidate = 0;  ///< rank in the ordered 𝕊 list
  int grasp_index = 0;
  std::string outcome;  ///< "ok" or the error text
};

struct HandoverDiagnostics {
  std::size_t sampled = 0;
  GoalSamplingStats sampling;
  std::size_t comfortable = 0;  ///< |S|
  std::size_t shared = 0;       ///< |𝕊|
  std::optional<std::size_t> chosen_index;
  std::vector<double> ordered_quality;
  std::vector<TransferAttempt> attempts;
};

struct HandoverResult {
  std::vector<HandoverPlanStep> steps;
  SlipAnalysis slip;
  HandoverDiagnostics diagnostics;
};

/// Fixed pipeline suction-pick → robot-robot-transfer → constrained-move →
/// human-release for one board, using the given candidate robot-human
/// poses. Iterates the ordered candidates until a constrained move plans.
HandoverResult plan_handover_with_candidates(const Scene& scene, const std::string& board_id,
                                             const RrHandover& rr, std::span<const Pose> candidates,
                                             std::uint64_t seed, HandoverDiagnostics diagnostics = {});

/// Full per-board pipeline with goal-pose sampling around the assembly pose.
HandoverResult build_handover_plan(const Scene& scene, const std::string& board_id, std::uint64_t seed);

}  // namespace hrc
