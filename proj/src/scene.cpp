#include "hrc/scene.hpp"

#include <algorithm>
#include <set>

#include "hrc/error.hpp"

namespace hrc {

std::pair<SerialChain, SerialChain> build_human_arms(const HumanBodySpec& b, const Pose& stance) {
  const Vec3 axes[7] = {Vec3::UnitZ(), Vec3::UnitY(), Vec3::UnitX(), -Vec3::UnitY(),
                        Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  const char* names[7] = {"shoulder_yaw", "shoulder_pitch", "shoulder_roll", "elbow",
                          "wrist_roll",   "wrist_pitch",    "wrist_yaw"};
  auto make = [&](double side) {
    SerialChain c;
    c.name = side > 0 ? "human_left" : "human_right";
    c.base = stance * Pose::translation(Vec3(0.0, side * b.shoulder_half_width, 0.0));
    for (int i = 0; i < 7; ++i) {
      Joint j;
      j.name = names[i];
      j.axis = axes[i];
      const bool mirrored = side < 0 && std::abs(axes[i].y()) < 0.5;
      j.lower = mirrored ? -b.limits[i].second : b.limits[i].first;
      j.upper = mirrored ? -b.limits[i].first : b.limits[i].second;
      if (i == 3) j.origin = Pose::translation(Vec3(b.upper_arm, 0.0, 0.0));
      if (i == 4) j.origin = Pose::translation(Vec3(b.forearm, 0.0, 0.0));
      c.joints.push_back(j);
    }
    c.joints[2].proxies.push_back({Pose::translation(Vec3(b.upper_arm / 2.0, 0.0, 0.0)),
                                   Vec3(b.upper_arm / 2.0 - 0.035, 0.045, 0.045)});
    c.joints[3].proxies.push_back({Pose::translation(Vec3(b.forearm / 2.0, 0.0, 0.0)),
                                   Vec3(b.forearm / 2.0 - 0.03, 0.035, 0.035)});
    Mat3 R;
    R.col(0) = Vec3::UnitY();
    R.col(1) = Vec3::UnitZ();
    R.col(2) = Vec3::UnitX();
    c.flange_to_tcp = Pose(Vec3(b.hand, 0.0, 0.0), R);
    c.tool_proxies.push_back({Pose::translation(Vec3(0.0, 0.0, -0.08)), Vec3(0.04, 0.012, 0.02)});
    auto seed = [&](double yaw, double pitch, double roll, double elbow, double wr, double wp, double wy) {
      JointConfig q(7);
      const double m = side;  // mirror yaw/roll-type joints
      q << m * yaw, pitch, m * roll, elbow, m * wr, wp, m * wy;
      return c.clamp(q);
    };
    c.ik_seeds = {seed(0.0, 0.6, 0.0, 1.3, 0.0, 0.0, 0.0), seed(-0.4, 0.9, 0.6, 1.6, -0.8, 0.3, 0.0),
                  seed(0.4, 0.3, -0.5, 1.0, 0.8, -0.3, 0.0)};
    c.finalize();
    return c;
  };
  return {make(1.0), make(-1.0)};
}

const BoardPlacement& Scene::board(const std::string& id) const {
  for (const auto& b : boards) {
    if (b.spec.id == id) return b;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown board '" + id + "'");
}

std::vector<Obb> Scene::finished_boxes() const {
  std::vector<Obb> out;
  for (const auto& id : finished) {
    const auto& b = board(id);
    out.push_back(b.spec.box_at(b.target));
  }
  return out;
}

std::vector<Obb> Scene::robot_grasp_obstacles() const {
  std::vector<Obb> out = workspace;
  for (const auto& f : finished_boxes()) out.push_back(f);
  out.push_back(human.body.torso.transformed(human.stance));
  for (const auto& v : link_volumes(suction.chain, suction.home)) out.push_back(v);
  return out;
}

PlanningScene Scene::robot_scene() const {
  PlanningScene s;
  s.obstacles = robot_grasp_obstacles();
  return s;
}

std::vector<Obb> Scene::human_obstacles() const {
  std::vector<Obb> out = workspace;
  for (const auto& f : finished_boxes()) out.push_back(f);
  return out;
}

TransferSetup Scene::transfer_setup(SlipCache* cache) const {
  TransferSetup t;
  t.ee_length = gripper.ee_length;
  t.pad = gripper.pad;
  t.grip_force = gripper.grip_force;
  t.cache = cache;
  return t;
}

void Scene::validate() const {
  std::set<std::string> ids;
  for (const auto& b : boards) {
    b.spec.validate();
    if (!ids.insert(b.spec.id).second) {
      throw Error(ErrorCode::InvariantViolation, "duplicate board id '" + b.spec.id + "'");
    }
    if (!b.initial.is_valid(1e-6) || !b.target.is_valid(1e-6)) {
      throw Error(ErrorCode::InvariantViolation, "board '" + b.spec.id + "' has an invalid pose");
    }
  }
  std::vector<std::string> seq = sequence;
  std::sort(seq.begin(), seq.end());
  if (seq != std::vector<std::string>(ids.begin(), ids.end())) {
    throw Error(ErrorCode::InvariantViolation, "assembly sequence is not a permutation of the boards");
  }
  for (std::size_t i = 0; i < boards.size(); ++i) {
    for (std::size_t j = i + 1; j < boards.size(); ++j) {
      // Shrink slightly so stacked boards resting on each other are allowed.
      Obb a = boards[i].spec.box_at(boards[i].initial);
      Obb b = boards[j].spec.box_at(boards[j].initial);
      a.half -= Vec3::Constant(1e-6);
      b.half -= Vec3::Constant(1e-6);
      if (intersects(a, b)) {
        throw Error(ErrorCode::InvariantViolation,
                    "initial poses of '" + boards[i].spec.id + "' and '" + boards[j].spec.id + "' interpenetrate");
      }
    }
  }
  if (static_cast<std::size_t>(receiving.home.size()) != receiving.chain.dof() ||
      static_cast<std::size_t>(suction.home.size()) != suction.chain.dof()) {
    throw Error(ErrorCode::InvariantViolation, "robot home configuration has the wrong size");
  }
  std::set<std::string> actors;
  for (const auto* c : {&receiving.chain, &suction.chain, &human.model.left, &human.model.right}) {
    if (!actors.insert(c->name).second) {
      throw Error(ErrorCode::InvariantViolation, "duplicate chain name '" + c->name + "'");
    }
  }
}

}  // namespace hrc
