#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "hrc/error.hpp"
#include "hrc/handover.hpp"
#include "hrc/planner.hpp"
#include "support.hpp"

using namespace hrc;

namespace {

const Scene& cabinet() {
  static const Scene s = load_scene(test::data_path("cabinet_scene.json"));
  return s;
}

// Selected robot-robot handover for the first board, computed once.
const RrHandover& base_rr() {
  static const RrHandover rr =
      select_rr_handover_pose(cabinet(), "base", cabinet().board("base").initial);
  return rr;
}

bool same_candidate(const GraspCandidate& a, const GraspCandidate& b) {
  return a.owner == b.owner && (a.contact_center - b.contact_center).norm() < 1e-12 &&
         (a.approach - b.approach).norm() < 1e-12 && (a.opening_dir - b.opening_dir).norm() < 1e-12;
}

// Above the cabinet floor, in front of the human.
Pose above_base_target() {
  const Pose t = cabinet().board("base").target;
  return {t.p + Vec3(0.0, 0.0, 0.25), t.R};
}

std::vector<Pose> poses_around(const Pose& goal, std::size_t n, std::uint64_t seed, double radius) {
  return sample_goal_poses(cabinet().board("base").spec, goal, {}, n, seed, nullptr, {deg2rad(45), radius});
}

}  // namespace

TEST(Handover, RrSelectionIsGridMaximizer) {
  const Scene& s = cabinet();
  const BoardSpec& board = s.board("base").spec;
  const auto obstacles = s.robot_grasp_obstacles();
  const auto cand = generate_candidates(board, Owner::RobotLeft, s.gripper.max_opening, s.config.grasp_spacing);
  FeasibilityOptions opts;
  opts.seeds = {s.receiving.home};

  std::size_t best_count = 0;
  double best_dist = 1e9;
  Pose best_pose;
  std::vector<Pose> grid{s.board("base").initial};
  for (const Vec3& p : s.rr_grid.positions) {
    for (double yaw : s.rr_grid.yaws) grid.emplace_back(p, rot_z(yaw));
  }
  for (const Pose& pose : grid) {
    if (!suction_attach(s, board, pose)) continue;
    if (intersects_any(board.box_at(pose), obstacles)) continue;
    const std::size_t n = feasible_grasps(board, pose, cand.grasps, s.receiving.chain, obstacles, opts).grasps.size();
    const double d = (pose.p - s.rr_grid.workspace_center).norm();
    if (n > best_count || (n == best_count && n > 0 && d < best_dist)) {
      best_count = n;
      best_dist = d;
      best_pose = pose;
    }
  }
  ASSERT_GT(best_count, 0u);
  const RrHandover& rr = base_rr();
  EXPECT_EQ(rr.receiving.grasps.size(), best_count);
  EXPECT_EQ(rr.pose.p, best_pose.p);
  EXPECT_EQ(rr.pose.R, best_pose.R);
  EXPECT_NEAR(rr.center_distance, best_dist, 1e-15);
}

TEST(Handover, RrSuctionSolutionHoldsTheTool) {
  const RrHandover& rr = base_rr();
  const Pose tcp = forward_kinematics(cabinet().suction.chain, rr.attach.q);
  const Pose want = rr.pose * rr.attach.tcp_in_object;
  EXPECT_LT((tcp.p - want.p).norm(), 1e-4);
  EXPECT_LT(test::angle_between(tcp.R, want.R), 1e-3);
  // Tool axis points down onto the upward face.
  EXPECT_LT((want.R.col(2) - Vec3(0, 0, -1)).norm(), 1e-12);
}

TEST(Handover, FeasibleInitialPoseIsScored) {
  Scene s = cabinet();
  s.boards[0].initial = base_rr().pose;
  const auto grid = rr_candidate_poses(s, s.boards[0].initial);
  EXPECT_EQ(grid.front().p, base_rr().pose.p);
  const auto c = evaluate_rr_candidate(s, s.boards[0].spec, grid.front());
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->receiving.grasps.size(), base_rr().receiving.grasps.size());
}

TEST(Handover, ThickBoardHasNoBimanualPose) {
  Scene s = cabinet();
  s.boards[0].spec.thickness = 0.10;
  try {
    select_rr_handover_pose(s, "base", s.boards[0].initial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoBimanualPose);
  }
}

TEST(Handover, ComfortFilterThresholdLimits) {
  const Scene& s = cabinet();
  const BoardSpec& board = s.board("base").spec;
  const auto obstacles = s.human_obstacles();
  const auto poses = poses_around(above_base_target(), 10, 11, 0.2);
  EXPECT_TRUE(filter_comfortable(poses, board, s.human.model, obstacles, 1.0 - 1e-9).empty());
  const auto all = filter_comfortable(poses, board, s.human.model, obstacles, 1e-12);
  std::size_t any = 0;
  for (const Pose& p : poses) any += !score_pose(board, p, s.human.model, obstacles).empty();
  EXPECT_EQ(all.size(), any);
  EXPECT_GT(any, 0u);
  EXPECT_THROW(filter_comfortable(poses, board, s.human.model, obstacles, 0.0), Error);
}

TEST(Handover, ComfortFilterMatchesRescoring) {
  const Scene& s = cabinet();
  const BoardSpec& board = s.board("base").spec;
  const HumanModel& h = s.human.model;
  const auto obstacles = s.human_obstacles();
  const auto poses = poses_around(above_base_target(), 50, 12, 0.2);
  const auto S = filter_comfortable(poses, board, h, obstacles, 0.15);

  std::vector<std::size_t> oracle;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    double best = -1.0;
    for (const auto* arm : {&h.left, &h.right}) {
      const Owner owner = arm == &h.left ? Owner::HumanLeft : Owner::HumanRight;
      for (const auto& g : generate_candidates(board, owner, h.max_opening, h.grasp_spacing).grasps) {
        if (!check_human_grasp_stability(g, board, poses[i], h.pad, h.grip_force)) continue;
        const GraspCandidate one[1] = {g};
        const GraspSet set = feasible_grasps(board, poses[i], one, *arm, obstacles);
        if (!set.empty()) best = std::max(best, comfort_score(*arm, set.grasps[0].q));
      }
    }
    if (best > 0.15) oracle.push_back(i);
  }
  EXPECT_FALSE(oracle.empty());
  EXPECT_LT(oracle.size(), poses.size());
  ASSERT_EQ(S.size(), oracle.size());
  for (std::size_t k = 0; k < S.size(); ++k) {
    EXPECT_EQ(S[k].source_index, oracle[k]);
    EXPECT_GT(S[k].best.value, 0.15);
  }
}

TEST(Handover, SharedFilterWithEmptyRrSetIsEmpty) {
  const Scene& s = cabinet();
  const auto poses = poses_around(base_rr().pose, 5, 13, 0.1);
  std::vector<ComfortablePose> S;
  for (std::size_t i = 0; i < poses.size(); ++i) S.push_back({poses[i], {}, i});
  GraspSet none;
  none.board_id = "base";
  EXPECT_TRUE(filter_shared(S, none, s.board("base").spec, s.receiving.chain, s.robot_grasp_obstacles()).empty());
}

TEST(Handover, SharedFilterKeepsTheRrPoseItself) {
  const Scene& s = cabinet();
  const RrHandover& rr = base_rr();
  const std::vector<ComfortablePose> S{{rr.pose, {}, 0}};
  const auto out = filter_shared(S, rr.receiving, s.board("base").spec, s.receiving.chain, s.robot_grasp_obstacles());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].shared.size(), rr.receiving.grasps.size());
}

TEST(Handover, SharedFilterMatchesPairwiseOracle) {
  const Scene& s = cabinet();
  const BoardSpec& board = s.board("base").spec;
  const RrHandover& rr = base_rr();
  const auto obstacles = s.robot_grasp_obstacles();
  const auto poses = poses_around(rr.pose, 30, 14, 0.15);
  std::vector<ComfortablePose> S;
  for (std::size_t i = 0; i < poses.size(); ++i) S.push_back({poses[i], {}, i});
  const auto out = filter_shared(S, rr.receiving, board, s.receiving.chain, obstacles);

  const auto cand = generate_candidates(board, Owner::RobotLeft, s.gripper.max_opening, s.config.grasp_spacing);
  std::vector<std::size_t> oracle;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    // Solve every candidate at the pose, seeded from its robot-robot solution when it has one.
    std::vector<GraspCandidate> here;
    for (const auto& g : cand.grasps) {
      FeasibilityOptions opts;
      for (const auto& e : rr.receiving.grasps) {
        if (same_candidate(e.grasp, g)) opts.seeds = {e.q};
      }
      const GraspCandidate one[1] = {g};
      if (!feasible_grasps(board, poses[i], one, s.receiving.chain, obstacles, opts).empty()) here.push_back(g);
    }
    bool any = false;
    for (const auto& e : rr.receiving.grasps) {
      for (const auto& g : here) any = any || same_candidate(e.grasp, g);
    }
    if (any) oracle.push_back(i);
  }
  ASSERT_EQ(out.size(), oracle.size());
  EXPECT_FALSE(out.empty());
  for (std::size_t k = 0; k < out.size(); ++k) {
    EXPECT_EQ(out[k].source_index, oracle[k]);
    for (const auto& g : out[k].shared) {
      EXPECT_NE(rr.receiving.find(g), nullptr);
      EXPECT_NE(out[k].robot_set.find(g), nullptr);
    }
  }
}

TEST(Handover, QualityOrdering) {
  const Pose target(Vec3(0.2, -0.5, 0.1), rot_z(kPi));
  HandoverCandidate at, near, far;
  at.pose = target;
  near.pose = Pose(target.p + Vec3(0.05, 0, 0), target.R);
  far.pose = Pose(target.p + Vec3(0.10, 0, 0), target.R);
  const auto ordered = select_handover_pose({far, near, at}, target, 0.1);
  EXPECT_EQ(ordered[0].quality, 0.0);
  EXPECT_NEAR(ordered[1].quality, 0.05, 1e-15);
  EXPECT_NEAR(ordered[2].quality, 0.10, 1e-15);
  try {
    select_handover_pose({}, target, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoHandoverPose);
  }
}

TEST(Handover, QualityOrderingMatchesBruteForceSort) {
  const Pose target(Vec3(0.2, -0.5, 0.1), rot_z(0.3));
  std::vector<HandoverCandidate> cands(20);
  Rng rng(15);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    cands[i].pose = sample_pose_near(target, deg2rad(45), 0.5, rng);
    cands[i].source_index = i;
  }
  const auto ordered = select_handover_pose(cands, target, 0.1);
  std::vector<double> q;
  for (const auto& c : cands) {
    q.push_back((c.pose.p - target.p).norm() + 0.1 * test::angle_between(c.pose.R, target.R));
  }
  std::vector<std::size_t> idx(cands.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return q[a] < q[b]; });
  for (std::size_t k = 0; k < idx.size(); ++k) {
    EXPECT_EQ(ordered[k].source_index, idx[k]);
    EXPECT_NEAR(ordered[k].quality, q[idx[k]], 1e-9);
  }
}

TEST(Handover, ExhaustedAttemptsFailPlanning) {
  Scene s = cabinet();
  s.config.max_transfer_attempts = 0;
  const auto poses = sample_goal_poses(s.board("base").spec, s.board("base").target, {}, s.config.goal_samples, 7);
  try {
    plan_handover_with_candidates(s, "base", base_rr(), poses, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PlanningFailed);
  }
  EXPECT_THROW(plan_handover_with_candidates(s, "base", base_rr(), {}, 7), Error);
}

TEST(Handover, FullPipelineChainsAndRevalidates) {
  const Scene& s = cabinet();
  const BoardPlacement& bp = s.board("base");
  const HandoverResult r = build_handover_plan(s, "base", 7);
  ASSERT_EQ(r.steps.size(), 4u);
  const StepKind kinds[4] = {StepKind::SuctionPick, StepKind::RobotRobotTransfer, StepKind::ConstrainedMove,
                             StepKind::HumanRelease};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(r.steps[k].kind, kinds[k]);
    EXPECT_EQ(r.steps[k].object, "base");
    if (k > 0) {
      EXPECT_EQ(r.steps[k].start.p, r.steps[k - 1].end.p);
      EXPECT_EQ(r.steps[k].start.R, r.steps[k - 1].end.R);
    }
  }
  EXPECT_EQ(r.steps[0].start.p, bp.initial.p);

  // Receiving-arm grasps: FK matches the object pose composed with the grasp.
  for (std::size_t k : {1u, 2u}) {
    const auto& st = r.steps[k];
    ASSERT_TRUE(st.grasp.has_value());
    const Pose fk = forward_kinematics(s.receiving.chain, st.actor_q);
    const Pose want = st.end * st.grasp->tcp_in_object();
    EXPECT_LT((fk.p - want.p).norm(), 1e-4);
    EXPECT_LT(test::angle_between(fk.R, want.R), 1e-3);
    EXPECT_FALSE(arm_in_collision(s.receiving.chain, st.actor_q, bp.spec.box_at(st.end), s.robot_grasp_obstacles()));
  }
  ASSERT_TRUE(r.steps[2].motion.has_value());
  EXPECT_TRUE(validate_plan(*r.steps[2].motion, s.receiving.chain, s.robot_scene()).ok());

  // Human hand-off: stable, comfortable and reachable.
  const auto& rel = r.steps[3];
  ASSERT_TRUE(rel.grasp.has_value());
  const SerialChain& arm = rel.grasp->owner == Owner::HumanLeft ? s.human.model.left : s.human.model.right;
  EXPECT_EQ(rel.actor, arm.name);
  EXPECT_TRUE(check_human_grasp_stability(*rel.grasp, bp.spec, rel.end, s.human.model.pad, s.human.model.grip_force));
  EXPECT_GT(comfort_score(arm, rel.actor_q), s.config.comfort_threshold);
  const Pose hand = forward_kinematics(arm, rel.actor_q);
  EXPECT_LT((hand.p - (rel.end * rel.grasp->tcp_in_object()).p).norm(), 1e-4);

  EXPECT_LE(r.diagnostics.shared, r.diagnostics.comfortable);
  EXPECT_LE(r.diagnostics.comfortable, r.diagnostics.sampled);
  EXPECT_EQ(r.diagnostics.sampled, s.config.goal_samples);
  EXPECT_TRUE(std::is_sorted(r.diagnostics.ordered_quality.begin(), r.diagnostics.ordered_quality.end()));
}

TEST(Handover, RejectionsGrowWithTheFinishedAssembly) {
  const Scene& s = cabinet();
  for (std::size_t k = 1; k < s.sequence.size(); ++k) {
    const BoardPlacement& bp = s.board(s.sequence[k]);
    std::vector<Obb> finished;
    std::size_t prev = 0;
    for (std::size_t j = 0; j < k; ++j) {
      finished.push_back(s.board(s.sequence[j]).spec.box_at(s.board(s.sequence[j]).target));
      GoalSamplingStats stats;
      try {
        sample_goal_poses(bp.spec, bp.target, finished, s.config.goal_samples, 7, &stats);
      } catch (const Error&) {
        break;  // budget exhausted: every later superset rejects at least as much
      }
      EXPECT_GE(stats.rejected(), prev) << bp.spec.id << " after " << j + 1 << " finished boards";
      prev = stats.rejected();
    }
  }
}
