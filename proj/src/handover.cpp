#include "hrc/handover.hpp"

#include <algorithm>
#include <limits>

#include "hrc/error.hpp"

namespace hrc {

Pose suction_tcp_in_object(const BoardSpec& board, const Pose& board_pose, double tool_length, double yaw) {
  // Attach to whichever face points up in the world.
  const double up = (board_pose.R * Vec3::UnitZ()).z() >= 0.0 ? 1.0 : -1.0;
  const Vec3 normal(0.0, 0.0, up);
  Mat3 R;
  R.col(2) = -normal;
  R.col(1) = Vec3(std::cos(yaw), std::sin(yaw), 0.0);
  R.col(0) = R.col(1).cross(R.col(2));
  return {normal * (board.thickness / 2.0 + tool_length), R};
}

std::optional<SuctionAttach> suction_attach(const Scene& scene, const BoardSpec& board, const Pose& pose) {
  const SerialChain& arm = scene.suction.chain;
  for (double yaw : scene.tool.yaw_samples) {
    const Pose in_obj = suction_tcp_in_object(board, pose, scene.tool.length, yaw);
    const IkResult ik = inverse_kinematics_multi(arm, pose * in_obj, {scene.suction.home});
    if (!ik.ok()) continue;
    bool blocked = false;
    for (const auto& v : link_volumes(arm, ik.q)) {
      if (intersects_any(v, scene.workspace)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return SuctionAttach{in_obj, yaw, ik.q};
  }
  return std::nullopt;
}

std::vector<Pose> rr_candidate_poses(const Scene& scene, const Pose& init_pose) {
  std::vector<Pose> out{init_pose};
  for (const auto& p : scene.rr_grid.positions) {
    for (double yaw : scene.rr_grid.yaws) out.emplace_back(p, rot_z(yaw));
  }
  return out;
}

std::optional<RrHandover> evaluate_rr_candidate(const Scene& scene, const BoardSpec& board, const Pose& pose) {
  auto attach = suction_attach(scene, board, pose);
  if (!attach) return std::nullopt;
  const auto obstacles = scene.robot_grasp_obstacles();
  if (intersects_any(board.box_at(pose), obstacles)) return std::nullopt;
  const auto candidates = generate_candidates(board, Owner::RobotLeft, scene.gripper.max_opening,
                                              scene.config.grasp_spacing);
  FeasibilityOptions opts;
  opts.seeds = {scene.receiving.home};
  GraspSet set = feasible_grasps(board, pose, candidates.grasps, scene.receiving.chain, obstacles, opts);
  set.owner = Owner::RobotLeft;
  if (set.empty()) return std::nullopt;
  return RrHandover{pose, std::move(*attach), std::move(set), (pose.p - scene.rr_grid.workspace_center).norm()};
}

RrHandover select_rr_handover_pose(const Scene& scene, const std::string& board_id, const Pose& init_pose) {
  const BoardSpec& board = scene.board(board_id).spec;
  if (!suction_attach(scene, board, init_pose)) {
    throw Error(ErrorCode::NoBimanualPose, "suction arm cannot reach board '" + board_id + "' at its initial pose");
  }
  std::optional<RrHandover> best;
  for (const auto& pose : rr_candidate_poses(scene, init_pose)) {
    auto c = evaluate_rr_candidate(scene, board, pose);
    if (!c) continue;
    if (!best || c->receiving.grasps.size() > best->receiving.grasps.size() ||
        (c->receiving.grasps.size() == best->receiving.grasps.size() &&
         c->center_distance < best->center_distance)) {
      best = std::move(c);
    }
  }
  if (!best) throw Error(ErrorCode::NoBimanualPose, "no robot-robot handover pose for board '" + board_id + "'");
  return *best;
}

std::vector<ComfortablePose> filter_comfortable(std::span<const Pose> candidates, const BoardSpec& board,
                                                const HumanModel& human, std::span<const Obb> obstacles,
                                                double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "comfort threshold must lie in (0, 1)");
  }
  std::vector<ComfortablePose> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto scores = score_pose(board, candidates[i], human, obstacles);
    if (scores.empty()) continue;
    const auto best = std::max_element(scores.begin(), scores.end(),
                                       [](const auto& a, const auto& b) { return a.value < b.value; });
    if (best->value > threshold) out.push_back({candidates[i], *best, i});
  }
  return out;
}

std::vector<HandoverCandidate> filter_shared(std::span<const ComfortablePose> comfortable, const GraspSet& rr_set,
                                             const BoardSpec& board, const SerialChain& receiving_arm,
                                             std::span<const Obb> obstacles) {
  std::vector<HandoverCandidate> out;
  if (rr_set.empty()) return out;
  for (const auto& c : comfortable) {
    // Only grasps feasible at the robot-robot pose can be shared; each is
    // solved at the candidate pose seeded from its robot-robot solution.
    GraspSet at_pose;
    at_pose.board_id = board.id;
    at_pose.owner = rr_set.owner;
    at_pose.object_pose = c.pose;
    for (const auto& e : rr_set.grasps) {
      FeasibilityOptions opts;
      opts.seeds = {e.q};
      const GraspCandidate g[1] = {e.grasp};
      const GraspSet one = feasible_grasps(board, c.pose, g, receiving_arm, obstacles, opts);
      if (!one.empty()) at_pose.grasps.push_back(one.grasps.front());
    }
    auto shared = shared_grasps(rr_set, at_pose);
    if (shared.empty()) continue;
    HandoverCandidate h;
    h.pose = c.pose;
    h.comfort = c.best;
    h.shared = std::move(shared);
    h.robot_set = std::move(at_pose);
    h.source_index = c.source_index;
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<HandoverCandidate> filter_shared(std::span<const ComfortablePose> comfortable, const Pose& rr_pose,
                                             const BoardSpec& board, const SerialChain& receiving_arm,
                                             double max_opening, double spacing, std::span<const Obb> obstacles) {
  const auto candidates = generate_candidates(board, Owner::RobotLeft, max_opening, spacing);
  GraspSet rr_set = feasible_grasps(board, rr_pose, candidates.grasps, receiving_arm, obstacles);
  rr_set.owner = Owner::RobotLeft;
  return filter_shared(comfortable, rr_set, board, receiving_arm, obstacles);
}

double handover_quality(const Pose& candidate, const Pose& target, double w_rot) {
  return (candidate.p - target.p).norm() + w_rot * rotation_distance(candidate.R, target.R);
}

std::vector<HandoverCandidate> select_handover_pose(std::vector<HandoverCandidate> candidates,
                                                    const Pose& assembly_pose, double w_rot) {
  if (candidates.empty()) throw Error(ErrorCode::NoHandoverPose, "no pose is both comfortable and shared");
  for (auto& c : candidates) c.quality = handover_quality(c.pose, assembly_pose, w_rot);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.quality < b.quality; });
  return candidates;
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::SuctionPick: return "suction-pick";
    case StepKind::RobotRobotTransfer: return "robot-robot-transfer";
    case StepKind::ConstrainedMove: return "constrained-move";
    case StepKind::HumanRelease: return "human-release";
  }
  return "?";
}

StepKind step_kind_from_string(const std::string& s) {
  for (StepKind k : {StepKind::SuctionPick, StepKind::RobotRobotTransfer, StepKind::ConstrainedMove,
                     StepKind::HumanRelease}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown step kind '" + s + "'");
}

HandoverResult plan_handover_with_candidates(const Scene& scene, const std::string& board_id,
                                             const RrHandover& rr, std::span<const Pose> candidates,
                                             std::uint64_t seed, HandoverDiagnostics diag) {
  const BoardPlacement& placement = scene.board(board_id);
  const BoardSpec& board = placement.spec;
  const auto human_obstacles = scene.human_obstacles();
  const auto robot_obstacles = scene.robot_grasp_obstacles();

  const auto S = filter_comfortable(candidates, board, scene.human.model, human_obstacles,
                                    scene.config.comfort_threshold);
  diag.comfortable = S.size();
  auto shared = filter_shared(S, rr.receiving, board, scene.receiving.chain, robot_obstacles);
  diag.shared = shared.size();
  const auto ordered = select_handover_pose(std::move(shared), placement.target, scene.config.w_rot);
  for (const auto& c : ordered) diag.ordered_quality.push_back(c.quality);

  const PlanningScene planning = scene.robot_scene();
  const TransferSetup setup = scene.transfer_setup();
  PlannerOptions opts;
  opts.budget_s = std::min(scene.config.attempt_budget_s, scene.config.budget_s);

  std::size_t attempt = 0;
  for (std::size_t rank = 0; rank < ordered.size(); ++rank) {
    const auto& cand = ordered[rank];
    for (const auto& grasp : cand.shared) {
      if (attempt >= scene.config.max_transfer_attempts) break;
      const GraspEntry* from = rr.receiving.find(grasp);
      const GraspEntry* to = cand.robot_set.find(grasp);
      TransferAttempt log{rank, grasp.index, "ok"};
      opts.seed = seed * 1000003ULL + attempt++;
      try {
        MotionPlan motion =
            plan_object_transfer(scene.receiving.chain, board, grasp, from->q, to->q, planning, setup, opts);
        diag.attempts.push_back(log);
        diag.chosen_index = rank;

        HandoverResult result;
        result.slip = relaxation_limit(grasp_geometry(board, grasp, scene.gripper.ee_length), scene.gripper.pad,
                                       scene.gripper.grip_force);
        const std::string human_actor = scene.human.model.left.name;
        const std::string human_arm = cand.comfort.grasp.owner == Owner::HumanLeft
                                          ? human_actor
                                          : scene.human.model.right.name;

        HandoverPlanStep pick;
        pick.kind = StepKind::SuctionPick;
        pick.actor = scene.suction.chain.name;
        pick.object = board.id;
        pick.start = placement.initial;
        pick.end = rr.pose;
        pick.suction = rr.attach;
        pick.actor_q = rr.attach.q;

        HandoverPlanStep transfer;
        transfer.kind = StepKind::RobotRobotTransfer;
        transfer.actor = scene.receiving.chain.name;
        transfer.object = board.id;
        transfer.start = rr.pose;
        transfer.end = rr.pose;
        transfer.grasp = grasp;
        transfer.actor_q = from->q;

        HandoverPlanStep move;
        move.kind = StepKind::ConstrainedMove;
        move.actor = scene.receiving.chain.name;
        move.object = board.id;
        move.start = rr.pose;
        move.end = cand.pose;
        move.grasp = grasp;
        move.actor_q = to->q;
        move.motion = std::move(motion);

        HandoverPlanStep release;
        release.kind = StepKind::HumanRelease;
        release.actor = human_arm;
        release.object = board.id;
        release.start = cand.pose;
        release.end = cand.pose;
        release.grasp = cand.comfort.grasp;
        release.actor_q = cand.comfort.human_config;

        result.steps = {std::move(pick), std::move(transfer), std::move(move), std::move(release)};
        result.diagnostics = std::move(diag);
        return result;
      } catch (const Error& e) {
        log.outcome = e.what();
        diag.attempts.push_back(log);
      }
    }
  }
  std::string msg = "board '" + board_id + "': no constrained move after " + std::to_string(attempt) +
                    " attempts over " + std::to_string(ordered.size()) + " handover poses";
  if (!diag.attempts.empty()) msg += " (last: " + diag.attempts.back().outcome + ")";
  throw Error(ErrorCode::PlanningFailed, msg);
}

HandoverResult build_handover_plan(const Scene& scene, const std::string& board_id, std::uint64_t seed) {
  const BoardPlacement& placement = scene.board(board_id);
  const RrHandover rr = select_rr_handover_pose(scene, board_id, placement.initial);
  HandoverDiagnostics diag;
  const auto finished = scene.finished_boxes();
  const auto poses = sample_goal_poses(placement.spec, placement.target, finished, scene.config.goal_samples, seed,
                                       &diag.sampling);
  diag.sampled = poses.size();
  return plan_handover_with_candidates(scene, board_id, rr, poses, seed, std::move(diag));
}

}  // namespace hrc
