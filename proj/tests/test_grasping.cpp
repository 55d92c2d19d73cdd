#include <gtest/gtest.h>

#include <cmath>

#include "hrc/comfort.hpp"
#include "hrc/error.hpp"
#include "hrc/grasping.hpp"
#include "support.hpp"

using namespace hrc;

namespace {

const BoardSpec kSmall{"small", 0.397, 0.280, 0.003, 0.22};
const BoardSpec kMedium{"medium", 0.587, 0.295, 0.010, 1.8};

// Flat board in front of a UR3 at the origin.
const Pose kReachable(Vec3(0.30, 0.0, 0.15), Mat3::Identity());

GraspSet robot_set(const BoardSpec& b, const Pose& pose, std::span<const Obb> obstacles = {}) {
  const SerialChain c = test::load_ur3();
  const auto cand = generate_candidates(b, Owner::RobotLeft, 0.085, 0.05);
  return feasible_grasps(b, pose, cand.grasps, c, obstacles);
}

bool same_object_frame_grasp(const GraspCandidate& a, const GraspCandidate& b) {
  return a.owner == b.owner && (a.contact_center - b.contact_center).norm() < 1e-12 &&
         (a.approach - b.approach).norm() < 1e-12 && (a.opening_dir - b.opening_dir).norm() < 1e-12 && std::abs(a.width - b.width) < 1e-12;
}

}  // namespace

TEST(Grasping, SmallBoardCandidateCount) {
  const auto c = generate_candidates(kSmall, Owner::RobotLeft, 0.085, 0.05);
  EXPECT_FALSE(c.too_thick);
  ASSERT_EQ(c.grasps.size(), 140u);
  for (std::size_t i = 0; i < c.grasps.size(); ++i) {
    const auto& g = c.grasps[i];
    EXPECT_EQ(g.index, static_cast<int>(i));
    EXPECT_EQ(g.width, kSmall.thickness);
    EXPECT_NEAR(g.approach.norm(), 1.0, 1e-15);
    EXPECT_NEAR(g.approach.dot(g.opening_dir), 0.0, 1e-15);
    EXPECT_LE(std::abs(g.contact_center.x()), kSmall.length / 2);
    EXPECT_LE(std::abs(g.contact_center.y()), kSmall.width / 2);
  }
}

TEST(Grasping, CoarseSpacingGivesOneCenter) {
  const auto c = generate_candidates(kSmall, Owner::HumanLeft, 0.12, 1.0);
  ASSERT_EQ(c.grasps.size(), 4u);
  for (const auto& g : c.grasps) EXPECT_EQ(g.contact_center, Vec3::Zero());
}

TEST(Grasping, ThickBoardIsGated) {
  const BoardSpec thick{"thick", 0.4, 0.3, 0.10, 2.0};
  const auto c = generate_candidates(thick, Owner::RobotLeft, 0.085, 0.05);
  EXPECT_TRUE(c.too_thick);
  EXPECT_TRUE(c.grasps.empty());
  EXPECT_THROW(generate_candidates(kSmall, Owner::RobotLeft, 0.085, 0.0), Error);
}

TEST(Grasping, CandidatesAreDeterministic) {
  const auto a = generate_candidates(kMedium, Owner::RobotRight, 0.085, 0.05);
  const auto b = generate_candidates(kMedium, Owner::RobotRight, 0.085, 0.05);
  ASSERT_EQ(a.grasps.size(), b.grasps.size());
  for (std::size_t i = 0; i < a.grasps.size(); ++i) EXPECT_TRUE(a.grasps[i].same_grasp(b.grasps[i]));
}

TEST(Grasping, TcpFrameIsRightHanded) {
  for (const auto& g : generate_candidates(kSmall, Owner::RobotLeft, 0.085, 0.05).grasps) {
    const Pose T = g.tcp_in_object();
    EXPECT_TRUE(T.is_valid(1e-12));
    EXPECT_EQ(T.R.col(2), g.approach);
  }
}

TEST(Grasping, UnreachablePoseIsEmpty) {
  EXPECT_TRUE(robot_set(kSmall, Pose(Vec3(0.0, 0.0, 2.0), Mat3::Identity())).empty());
}

TEST(Grasping, ReachablePoseRevalidates) {
  const SerialChain chain = test::load_ur3();
  const GraspSet set = robot_set(kSmall, kReachable);
  ASSERT_FALSE(set.empty());
  EXPECT_EQ(set.board_id, "small");
  const Obb box = kSmall.box_at(kReachable);
  const IkOptions tol;
  for (const auto& e : set.grasps) {
    const Pose want = kReachable * e.grasp.tcp_in_object();
    const Pose got = forward_kinematics(chain, e.q);
    EXPECT_LT((got.p - want.p).norm(), tol.position_tolerance);
    EXPECT_LT(test::angle_between(got.R, want.R), tol.rotation_tolerance);
    EXPECT_TRUE(chain.within_limits(e.q));
    for (const auto& v : link_volumes(chain, e.q)) EXPECT_FALSE(intersects(v, box));
  }
}

TEST(Grasping, FeasibilityIsDeterministic) {
  const GraspSet a = robot_set(kSmall, kReachable);
  const GraspSet b = robot_set(kSmall, kReachable);
  ASSERT_EQ(a.grasps.size(), b.grasps.size());
  for (std::size_t i = 0; i < a.grasps.size(); ++i) {
    EXPECT_EQ(a.grasps[i].grasp.index, b.grasps[i].grasp.index);
    EXPECT_EQ(a.grasps[i].q, b.grasps[i].q);
  }
}

TEST(Grasping, ObstacleAroundBoardEmptiesSet) {
  const std::vector<Obb> wall{{kReachable, Vec3(0.05, 0.05, 0.05)}};
  EXPECT_TRUE(robot_set(kSmall, kReachable, wall).empty());
}

TEST(Grasping, SetEntriesAreObjectFrameCandidates) {
  const auto cand = generate_candidates(kSmall, Owner::RobotLeft, 0.085, 0.05);
  for (const Pose& pose : {kReachable, Pose(Vec3(0.25, 0.1, 0.2), rot_z(0.7))}) {
    for (const auto& e : robot_set(kSmall, pose).grasps) {
      EXPECT_TRUE(same_object_frame_grasp(e.grasp, cand.grasps[static_cast<std::size_t>(e.grasp.index)]));
    }
  }
}

TEST(Grasping, SharedWithSelfIsFullSet) {
  const GraspSet set = robot_set(kSmall, kReachable);
  const auto shared = shared_grasps(set, set);
  ASSERT_EQ(shared.size(), set.grasps.size());
}

TEST(Grasping, SharedWithEmptyIsEmpty) {
  const GraspSet set = robot_set(kSmall, kReachable);
  GraspSet none;
  none.board_id = set.board_id;
  none.owner = set.owner;
  EXPECT_TRUE(shared_grasps(set, none).empty());
}

std::vector<GraspCandidate> pairwise_shared(const GraspSet& a, const GraspSet& b) {
  std::vector<GraspCandidate> out;
  for (const auto& ea : a.grasps) {
    for (const auto& eb : b.grasps) {
      if (same_object_frame_grasp(ea.grasp, eb.grasp)) {
        out.push_back(ea.grasp);
        break;
      }
    }
  }
  return out;
}

void expect_matches_pairwise(const GraspSet& a, const GraspSet& b) {
  const auto oracle = pairwise_shared(a, b);
  const auto shared = shared_grasps(a, b);
  ASSERT_EQ(shared.size(), oracle.size());
  for (std::size_t i = 0; i < shared.size(); ++i) EXPECT_EQ(shared[i].index, oracle[i].index);
  for (const auto& g : shared) {
    EXPECT_NE(a.find(g), nullptr);
    EXPECT_NE(b.find(g), nullptr);
  }
}

TEST(Grasping, SharedMatchesPairwiseOracleUnderHalfTurn) {
  const GraspSet a = robot_set(kSmall, kReachable);
  const GraspSet b = robot_set(kSmall, Pose(kReachable.p, kReachable.R * rot_z(kPi)));
  ASSERT_FALSE(a.empty());
  ASSERT_FALSE(b.empty());
  expect_matches_pairwise(a, b);
}

TEST(Grasping, SharedMatchesPairwiseOracleUnderShift) {
  const GraspSet a = robot_set(kSmall, Pose(Vec3(0.2, 0.0, 0.3), Mat3::Identity()));
  const GraspSet b = robot_set(kSmall, Pose(Vec3(0.22, 0.02, 0.3), rot_z(0.1)));
  EXPECT_FALSE(shared_grasps(a, b).empty());
  expect_matches_pairwise(a, b);
}

TEST(Grasping, SharedRejectsMismatchedSets) {
  GraspSet a, b;
  a.board_id = "x";
  b.board_id = "y";
  try {
    shared_grasps(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OwnerMismatch);
  }
  b.board_id = "x";
  GraspEntry e;
  e.grasp.owner = Owner::RobotLeft;
  a.grasps.push_back(e);
  a.owner = Owner::RobotLeft;
  e.grasp.owner = Owner::HumanLeft;
  b.grasps.push_back(e);
  b.owner = Owner::HumanLeft;
  EXPECT_THROW(shared_grasps(a, b), Error);
}

TEST(Grasping, MasslessBoardIsStable) {
  BoardSpec b = kMedium;
  b.mass = 0.0;
  const HumanModel h;
  for (const auto& g : generate_candidates(b, Owner::HumanLeft, 0.12, 0.05).grasps) {
    EXPECT_TRUE(check_human_grasp_stability(g, b, Pose(Vec3::Zero(), rot_x(1.0)), h.pad, h.grip_force));
  }
}

TEST(Grasping, CenterPinchOfFlatBoardIsStable) {
  const HumanModel h;
  GraspCandidate g;
  g.owner = Owner::HumanLeft;
  g.opening_dir = Vec3::UnitZ();
  for (double mass : {0.1, 1.0, 5.0, 15.0}) {
    BoardSpec b = kMedium;
    b.mass = mass;
    EXPECT_TRUE(check_human_grasp_stability(g, b, Pose(), h.pad, h.grip_force)) << mass;
  }
}

TEST(Grasping, HeavyBoardAtFarEdgeSlips) {
  const HumanModel h;
  BoardSpec b = kMedium;
  b.mass = 5.0;
  GraspCandidate g;
  g.owner = Owner::HumanLeft;
  g.contact_center = Vec3(-0.25, 0.0, 0.0);
  g.approach = Vec3::UnitX();
  g.opening_dir = Vec3::UnitZ();
  // Board on edge with the length horizontal: the lever lies in the pad plane.
  const Pose pose(Vec3(0.3, 0.0, 1.0), rot_x(kPi / 2));
  const double tau = 5.0 * kGravity * 0.25 / 2.0;
  EXPECT_GT(tau, eccentricity(h.pad, h.grip_force) * h.pad.mu * h.grip_force);
  EXPECT_FALSE(check_human_grasp_stability(g, b, pose, h.pad, h.grip_force));
  b.mass = 1e-4;
  EXPECT_TRUE(check_human_grasp_stability(g, b, pose, h.pad, h.grip_force));
}

TEST(Grasping, GeometryOfCanonicalGrasps) {
  const auto c = generate_candidates(kMedium, Owner::RobotLeft, 0.085, 0.05);
  const GraspCandidate lon = canonical_grasp(c, GraspAxis::Longitudinal);
  const GraspCandidate tr = canonical_grasp(c, GraspAxis::Transverse);
  EXPECT_LT(lon.contact_center.dot(lon.approach), 0.0);
  EXPECT_LT(tr.contact_center.dot(tr.approach), 0.0);
  const GraspGeometry gl = grasp_geometry(kMedium, lon, 0.2);
  const GraspGeometry gt = grasp_geometry(kMedium, tr, 0.2);
  EXPECT_GT(gl.com_offset, gt.com_offset);
  EXPECT_NEAR(gl.com_offset, lon.contact_center.norm(), 1e-15);
  EXPECT_NEAR(gt.inertia, kMedium.mass * ((0.587 * 0.587 + 0.295 * 0.295) / 12.0 + gt.com_offset * gt.com_offset),
              1e-12);
  const Vec3 d = com_direction_in_tcp(lon);
  EXPECT_NEAR(d.norm(), 1.0, 1e-12);
  // The CoM lies ahead of the fingertips.
  EXPECT_GT(d.z(), 0.99);
}

TEST(Grasping, OwnerAndAxisNamesRoundTrip) {
  for (Owner o : {Owner::RobotLeft, Owner::RobotRight, Owner::HumanLeft, Owner::HumanRight}) {
    EXPECT_EQ(owner_from_string(to_string(o)), o);
  }
  EXPECT_EQ(axis_from_string("transverse"), GraspAxis::Transverse);
  EXPECT_THROW(owner_from_string("robot"), Error);
}

TEST(Grasping, BoardValidation) {
  EXPECT_NO_THROW(kMedium.validate());
  EXPECT_THROW((BoardSpec{"bad", 0.2, 0.3, 0.01, 1.0}.validate()), Error);
  EXPECT_THROW((BoardSpec{"bad", 0.3, 0.2, 0.01, -1.0}.validate()), Error);
}
