#include <gtest/gtest.h>

#include "hrc/error.hpp"
#include "hrc/planner.hpp"
#include "support.hpp"

using namespace hrc;

namespace {

const BoardSpec kMedium{"medium", 0.587, 0.295, 0.010, 1.8};
const BoardSpec kLarge{"large", 0.390, 0.288, 0.010, 0.8};

// Board held by its short edge, opening up, then turned half a revolution
// about the approach axis.
struct FlipTask {
  SerialChain arm = test::load_ur3();
  GraspCandidate grasp;
  Pose start, goal;
  JointConfig q_start, q_goal;
  InclinationConstraint constraint;
  std::optional<AttachedObject> attached;
  PlanningScene scene;

  FlipTask(const BoardSpec& board, double limit_deg) {
    grasp = canonical_grasp(generate_candidates(board, Owner::RobotLeft, 0.085, 0.05), GraspAxis::Longitudinal);
    Mat3 R;
    R.col(0) = Vec3(0, 1, 0);
    R.col(1) = Vec3(0, 0, 1);
    R.col(2) = Vec3(1, 0, 0);
    start = Pose(Vec3(0.45, 0.0, 0.35), R);
    goal = Pose(start.p, R * rot_z(kPi));
    const IkResult a = inverse_kinematics_multi(arm, start, {});
    const IkResult b = inverse_kinematics_multi(arm, goal, {a.q});
    EXPECT_TRUE(a.ok() && b.ok());
    q_start = a.q;
    q_goal = b.q;
    constraint.limit = deg2rad(limit_deg);
    constraint.com_dir_tcp = com_direction_in_tcp(grasp);
    attached = attach_board(board, grasp);
  }

  MotionPlan plan(std::uint64_t seed) const {
    PlannerOptions o;
    o.seed = seed;
    return plan_constrained(arm, q_start, q_goal, constraint, scene, attached, o);
  }
};

Mat3 with_opening(const Vec3& y) {
  const Vec3 yy = y.normalized();
  const Vec3 z = yy.unitOrthogonal();
  Mat3 R;
  R.col(0) = yy.cross(z);
  R.col(1) = yy;
  R.col(2) = z;
  return R;
}

}  // namespace

TEST(Planner, OpeningDownIsZero) {
  EXPECT_NEAR(inclination_of_rotation(with_opening(Vec3(0, 0, -1)), {}), 0.0, 1e-15);
  EXPECT_NEAR(inclination_of_rotation(with_opening(Vec3(0, 0, 1)), {}), 0.0, 1e-15);
}

TEST(Planner, OpeningHorizontalIsNinety) {
  EXPECT_NEAR(inclination_of_rotation(with_opening(Vec3(1, 1, 0)), {}), kPi / 2, 1e-12);
}

TEST(Planner, OpeningAtFortyFive) {
  EXPECT_NEAR(inclination_of_rotation(with_opening(Vec3(1, 0, -1)), {}), kPi / 4, 1e-12);
  EXPECT_NEAR(inclination_of_rotation(with_opening(Vec3(0, -1, 1)), {}), kPi / 4, 1e-12);
}

TEST(Planner, InclinationUsesTcpOpeningAxis) {
  const SerialChain arm = test::load_ur3();
  std::mt19937_64 rng(81);
  for (int k = 0; k < 50; ++k) {
    const JointConfig q = test::random_config(arm, rng);
    const Vec3 y = forward_kinematics(arm, q).R.col(1);
    EXPECT_NEAR(inclination_of(arm, q), std::acos(std::min(1.0, std::abs(y.z()))), 1e-9);
  }
}

TEST(Planner, TorqueAwareInclinationFollowsTheLever) {
  InclinationConstraint c;
  c.com_dir_tcp = Vec3::UnitZ();
  // Opening vertical with a horizontal lever: no gravity torque about the pads.
  EXPECT_NEAR(inclination_of_rotation(with_opening(Vec3(0, 0, 1)), c), 0.0, 1e-12);
  // Opening horizontal, lever horizontal: full torque.
  Mat3 R;
  R.col(0) = Vec3(0, 0, 1);
  R.col(1) = Vec3(0, 1, 0);
  R.col(2) = Vec3(1, 0, 0);
  EXPECT_NEAR(inclination_of_rotation(R, c), kPi / 2, 1e-12);
  // Opening horizontal but the lever hangs straight down: the CoM sits below the pads.
  R.col(0) = Vec3(1, 0, 0);
  R.col(1) = Vec3(0, 1, 0);
  R.col(2) = Vec3(0, 0, -1);
  EXPECT_NEAR(inclination_of_rotation(R, c), 0.0, 1e-12);
}

TEST(Planner, StartEqualsGoal) {
  const FlipTask t(kMedium, 40);
  PlannerOptions o;
  const MotionPlan p = plan_constrained(t.arm, t.q_start, t.q_start, t.constraint, t.scene, t.attached, o);
  ASSERT_EQ(p.waypoints.size(), 1u);
  EXPECT_EQ(p.waypoints[0], t.q_start);
}

TEST(Planner, UnconstrainedFlipSucceeds) {
  const FlipTask t(kMedium, 90);
  const MotionPlan p = t.plan(1);
  EXPECT_TRUE(validate_plan(p, t.arm, t.scene).ok());
  EXPECT_EQ(p.waypoints.front(), t.q_start);
  EXPECT_EQ(p.waypoints.back(), t.q_goal);
}

TEST(Planner, GeodesicFlipMidpointIsNinety) {
  const FlipTask t(kMedium, 22);
  const Mat3 mid = t.start.R * rot_z(kPi / 2);
  EXPECT_NEAR(inclination_of_rotation(mid, t.constraint), kPi / 2, 1e-9);
  EXPECT_NEAR(inclination_of_rotation(t.start.R, t.constraint), 0.0, 1e-9);
  EXPECT_NEAR(inclination_of_rotation(t.goal.R, t.constraint), 0.0, 1e-9);
}

TEST(Planner, TightFlipStaysWithinLimit) {
  const FlipTask t(kMedium, 22);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MotionPlan p = t.plan(seed);
    const ValidationReport r = validate_plan(p, t.arm, t.scene, 0.005);
    EXPECT_TRUE(r.ok()) << seed;
    EXPECT_LE(r.max_inclination, deg2rad(22) + 1e-6);
    for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
      EXPECT_LE((p.waypoints[i] - p.waypoints[i - 1]).cwiseAbs().maxCoeff(), 0.05 + 1e-12);
    }
  }
}

TEST(Planner, SameSeedSamePath) {
  const FlipTask t(kMedium, 40);
  const MotionPlan a = t.plan(17), b = t.plan(17);
  ASSERT_EQ(a.waypoints.size(), b.waypoints.size());
  for (std::size_t i = 0; i < a.waypoints.size(); ++i) EXPECT_EQ(a.waypoints[i], b.waypoints[i]);
}

TEST(Planner, ViolatingEndpointIsRejected) {
  const FlipTask t(kMedium, 22);
  const IkResult mid = inverse_kinematics_multi(t.arm, Pose(t.start.p, t.start.R * rot_z(kPi / 2)), {t.q_start});
  ASSERT_TRUE(mid.ok());
  try {
    plan_constrained(t.arm, t.q_start, mid.q, t.constraint, t.scene, t.attached, PlannerOptions{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidEndpoint);
  }
}

TEST(Planner, HandBuiltViolationIsLocated) {
  const FlipTask t(kMedium, 22);
  const IkResult mid = inverse_kinematics_multi(t.arm, Pose(t.start.p, t.start.R * rot_z(kPi / 2)), {t.q_start});
  ASSERT_TRUE(mid.ok());
  MotionPlan p;
  p.arm = t.arm.name;
  p.waypoints = {t.q_start, mid.q, t.q_goal};
  p.constraint = t.constraint;
  p.attached = t.attached;
  const ValidationReport r = validate_plan(p, t.arm, t.scene);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.constraint_ok);
  ASSERT_TRUE(r.first_constraint_violation.has_value());
  EXPECT_GT(*r.first_constraint_violation, 0.0);
  EXPECT_LE(*r.first_constraint_violation, 1.0);
  EXPECT_NEAR(r.max_inclination, kPi / 2, 1e-3);

  // The first violating state is just past the 22° crossing on segment 0.
  const double s = *r.first_constraint_violation;
  const JointConfig q = t.q_start + s * (mid.q - t.q_start);
  EXPECT_GT(inclination_of(t.arm, q, t.constraint), deg2rad(22));

  const ValidationReport again = validate_plan(p, t.arm, t.scene);
  EXPECT_EQ(again.first_constraint_violation, r.first_constraint_violation);
  EXPECT_EQ(again.states_checked, r.states_checked);
  EXPECT_EQ(again.max_inclination, r.max_inclination);
}

TEST(Planner, CollisionViolationIsLocated) {
  const FlipTask t(kMedium, 90);
  MotionPlan p = t.plan(3);
  PlanningScene blocked;
  blocked.obstacles.push_back({Pose::translation(t.start.p), Vec3(0.05, 0.05, 0.05)});
  const ValidationReport r = validate_plan(p, t.arm, blocked);
  EXPECT_FALSE(r.collision_ok);
  ASSERT_TRUE(r.first_collision.has_value());
  EXPECT_EQ(*r.first_collision, 0.0);
}

TEST(Planner, FinerRecheckFindsNothingNew) {
  const FlipTask base(kMedium, 40);
  FlipTask t = base;
  // A post beside the flip forces the board around it.
  t.scene.obstacles.push_back({Pose::translation(Vec3(0.45, 0.45, 0.35)), Vec3(0.05, 0.05, 0.3)});
  ASSERT_TRUE(StateValidator(t.arm, t.constraint, t.scene, t.attached).valid(t.q_start));
  const MotionPlan p = t.plan(5);
  EXPECT_TRUE(validate_plan(p, t.arm, t.scene, 0.01).ok());
  EXPECT_TRUE(validate_plan(p, t.arm, t.scene, 0.005).ok());
}

TEST(Planner, SuccessDoesNotGrowAsTheLimitTightens) {
  int prev = 50;
  for (double limit : {90.0, 62.0, 40.0, 22.0}) {
    const FlipTask t(kMedium, limit);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      PlannerOptions o;
      o.seed = seed;
      o.max_samples = 400;
      try {
        plan_constrained(t.arm, t.q_start, t.q_goal, t.constraint, t.scene, t.attached, o);
        ++ok;
      } catch (const Error&) {
      }
    }
    EXPECT_LE(ok, prev) << limit;
    RecordProperty("successes_at_" + std::to_string(static_cast<int>(limit)), ok);
    prev = ok;
  }
}

TEST(Planner, MasslessTransferIsUnconstrained) {
  BoardSpec b = kMedium;
  b.mass = 0.0;
  const FlipTask t(b, 90);
  TransferSetup setup;
  const MotionPlan p = plan_object_transfer(t.arm, b, t.grasp, t.start * t.grasp.tcp_in_object().inverse(),
                                            t.goal * t.grasp.tcp_in_object().inverse(), t.scene, setup, {});
  EXPECT_EQ(p.constraint.limit, kPi / 2);
  EXPECT_TRUE(validate_plan(p, t.arm, t.scene).ok());
}

TEST(Planner, LargeBoardFlipStaysWithinItsLimit) {
  const double P = read_number(read_json_file(test::data_path("cabinet_scene.json"))["gripper"]["grip_force"], "P");
  const FlipTask t(kLarge, 90);
  TransferSetup setup;
  setup.pad = SoftFingerParams{0.8, 0.002, 5.0e5, 0.015, 0.05};
  setup.grip_force = P;
  PlannerOptions o;
  o.seed = 2;
  const MotionPlan p = plan_object_transfer(t.arm, kLarge, t.grasp, t.start * t.grasp.tcp_in_object().inverse(),
                                            t.goal * t.grasp.tcp_in_object().inverse(), t.scene, setup, o);
  const double limit = relaxation_limit(grasp_geometry(kLarge, t.grasp, setup.ee_length), setup.pad, P).relaxation_limit;
  EXPECT_EQ(p.constraint.limit, limit);
  const ValidationReport r = validate_plan(p, t.arm, t.scene);
  EXPECT_TRUE(r.ok());
  EXPECT_LE(r.max_inclination, limit + 1e-6);
}

TEST(Planner, UnreachableTransferGoal) {
  const FlipTask t(kMedium, 90);
  try {
    plan_object_transfer(t.arm, kMedium, t.grasp, t.start * t.grasp.tcp_in_object().inverse(),
                         Pose(Vec3(2.0, 0.0, 0.3), Mat3::Identity()), t.scene, TransferSetup{}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidEndpoint);
  }
}

TEST(Planner, TimestampsFollowJointSpeed) {
  MotionPlan p;
  JointConfig a = JointConfig::Zero(2), b(2), c(2);
  b << 0.5, 0.1;
  c << 0.5, -0.4;
  p.waypoints = {a, b, c};
  const auto t = plan_timestamps(p, 0.5);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], 0.0);
  EXPECT_NEAR(t[1], 1.0, 1e-15);
  EXPECT_NEAR(t[2], 2.0, 1e-15);
}
