#include <filesystem>

#include "hrc/error.hpp"
#include "hrc/scene.hpp"

namespace hrc {

namespace {

namespace fs = std::filesystem;

Json resolve(const Json& j, const std::string& base_dir) {
  if (!j.is_string()) return j;
  fs::path p(j.get<std::string>());
  if (p.is_relative()) p = fs::path(base_dir) / p;
  return read_json_file(p.string());
}

double number_or(const Json& j, const char* key, const std::string& path, double fallback) {
  return has(j, key) ? read_number(j[key], join(path, key)) : fallback;
}

double positive_or(const Json& j, const char* key, const std::string& path, double fallback) {
  const double v = number_or(j, key, path, fallback);
  if (!(v > 0.0)) throw Error(ErrorCode::ParseError, join(path, key) + ": must be positive");
  return v;
}

std::size_t count_or(const Json& j, const char* key, const std::string& path, std::size_t fallback) {
  if (!has(j, key)) return fallback;
  if (!j[key].is_number_unsigned()) {
    throw Error(ErrorCode::ParseError, join(path, key) + ": expected a non-negative integer");
  }
  return j[key].get<std::size_t>();
}

RobotArm read_arm(const Json& j, const std::string& path, const std::string& base_dir) {
  RobotArm arm;
  const std::string cp = join(path, "chain");
  Json chain = resolve(field(j, "chain", path), base_dir);
  if (has(j, "name")) chain["name"] = j["name"];
  if (has(j, "base")) chain["base"] = j["base"];
  arm.chain = read_chain(chain, cp);
  arm.home = has(j, "home") ? read_vector(j["home"], join(path, "home"))
                            : JointConfig(JointConfig::Zero(static_cast<Eigen::Index>(arm.chain.dof())));
  if (static_cast<std::size_t>(arm.home.size()) != arm.chain.dof()) {
    throw Error(ErrorCode::ParseError, join(path, "home") + ": wrong length");
  }
  return arm;
}

Json arm_to_json(const RobotArm& arm) { return Json{{"chain", to_json(arm.chain)}, {"home", to_json(arm.home)}}; }

}  // namespace

SoftFingerParams read_pad(const Json& j, const std::string& path, const SoftFingerParams& d) {
  SoftFingerParams p;
  p.mu = number_or(j, "mu", path, d.mu);
  p.h = number_or(j, "h", path, d.h);
  p.K = number_or(j, "K", path, d.K);
  p.r1 = number_or(j, "r1", path, d.r1);
  p.r2 = number_or(j, "r2", path, d.r2);
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return p;
}

Json to_json(const SoftFingerParams& p) {
  return Json{{"mu", p.mu}, {"h", p.h}, {"K", p.K}, {"r1", p.r1}, {"r2", p.r2}};
}

HumanBodySpec read_human_body(const Json& j, const std::string& path) {
  HumanBodySpec b;
  b.shoulder_half_width = positive_or(j, "shoulder_half_width", path, b.shoulder_half_width);
  b.upper_arm = positive_or(j, "upper_arm", path, b.upper_arm);
  b.forearm = positive_or(j, "forearm", path, b.forearm);
  b.hand = positive_or(j, "hand", path, b.hand);
  if (has(j, "limits")) {
    const std::string lp = join(path, "limits");
    const Json& l = j["limits"];
    if (!l.is_array() || l.size() != 7) throw Error(ErrorCode::ParseError, lp + ": expected 7 [lower, upper] pairs");
    for (std::size_t i = 0; i < 7; ++i) {
      if (!l[i].is_array() || l[i].size() != 2) throw Error(ErrorCode::ParseError, join(lp, i) + ": expected a pair");
      b.limits[i] = {read_angle(l[i][0], join(join(lp, i), std::size_t{0})),
                     read_angle(l[i][1], join(join(lp, i), std::size_t{1}))};
      if (!(b.limits[i].first < b.limits[i].second)) {
        throw Error(ErrorCode::ParseError, join(lp, i) + ": lower must be below upper");
      }
    }
  }
  if (has(j, "torso")) b.torso = read_obb(j["torso"], join(path, "torso"));
  return b;
}

Json to_json(const HumanBodySpec& b) {
  Json limits = Json::array();
  for (const auto& [lo, hi] : b.limits) limits.push_back(Json::array({lo, hi}));
  return Json{{"shoulder_half_width", b.shoulder_half_width},
              {"upper_arm", b.upper_arm},
              {"forearm", b.forearm},
              {"hand", b.hand},
              {"limits", limits},
              {"torso", to_json(b.torso)}};
}

Json to_json(const BoardSpec& b) {
  return Json{{"id", b.id}, {"length", b.length}, {"width", b.width}, {"thickness", b.thickness}, {"mass", b.mass}};
}

Scene scene_from_json(const Json& j, const std::string& base_dir) {
  Scene s;
  const Json& robot = field(j, "robot", "");
  s.receiving = read_arm(field(robot, "receiving", "robot"), "robot.receiving", base_dir);
  s.suction = read_arm(field(robot, "suction", "robot"), "robot.suction", base_dir);

  if (has(j, "gripper")) {
    const Json& g = j["gripper"];
    s.gripper.max_opening = positive_or(g, "max_opening", "gripper", s.gripper.max_opening);
    s.gripper.ee_length = positive_or(g, "ee_length", "gripper", s.gripper.ee_length);
    s.gripper.grip_force = positive_or(g, "grip_force", "gripper", s.gripper.grip_force);
    if (has(g, "pad")) s.gripper.pad = read_pad(g["pad"], "gripper.pad", s.gripper.pad);
  }

  const Json& h = field(j, "human", "");
  s.human.body = has(h, "body") ? read_human_body(resolve(h["body"], base_dir), "human.body") : HumanBodySpec{};
  s.human.stance = read_pose(field(h, "stance", "human"), "human.stance");
  HumanModel& m = s.human.model;
  if (has(h, "pad")) m.pad = read_pad(h["pad"], "human.pad", m.pad);
  m.grip_force = positive_or(h, "grip_force", "human", m.grip_force);
  m.max_opening = positive_or(h, "max_opening", "human", m.max_opening);
  m.grasp_spacing = positive_or(h, "grasp_spacing", "human", m.grasp_spacing);
  std::tie(m.left, m.right) = build_human_arms(s.human.body, s.human.stance);

  if (has(j, "tool")) {
    const Json& t = j["tool"];
    s.tool.length = positive_or(t, "length", "tool", s.tool.length);
    s.tool.radius = positive_or(t, "radius", "tool", s.tool.radius);
    if (has(t, "initial")) s.tool.initial_pose = read_pose(t["initial"], "tool.initial");
    if (has(t, "yaw_samples")) {
      const Eigen::VectorXd y = read_vector(t["yaw_samples"], "tool.yaw_samples");
      s.tool.yaw_samples.assign(y.data(), y.data() + y.size());
    }
  }

  const Json& boards = field(j, "boards", "");
  if (!boards.is_array()) throw Error(ErrorCode::ParseError, "boards: expected an array");
  for (std::size_t i = 0; i < boards.size(); ++i) {
    const std::string p = join("boards", i);
    const Json& b = boards[i];
    BoardPlacement bp;
    bp.spec.id = read_string(field(b, "id", p), join(p, "id"));
    bp.spec.length = read_number(field(b, "length", p), join(p, "length"));
    bp.spec.width = read_number(field(b, "width", p), join(p, "width"));
    bp.spec.thickness = read_number(field(b, "thickness", p), join(p, "thickness"));
    bp.spec.mass = read_number(field(b, "mass", p), join(p, "mass"));
    bp.initial = read_pose(field(b, "initial", p), join(p, "initial"));
    bp.target = read_pose(field(b, "target", p), join(p, "target"));
    s.boards.push_back(bp);
  }
  if (has(j, "sequence")) {
    for (std::size_t i = 0; i < j["sequence"].size(); ++i) {
      s.sequence.push_back(read_string(j["sequence"][i], join("sequence", i)));
    }
  } else {
    for (const auto& b : s.boards) s.sequence.push_back(b.spec.id);
  }
  if (has(j, "workspace")) s.workspace = read_obbs(j["workspace"], "workspace");
  if (has(j, "finished")) {
    for (std::size_t i = 0; i < j["finished"].size(); ++i) {
      s.finished.push_back(read_string(j["finished"][i], join("finished", i)));
    }
  }

  if (has(j, "rr_grid")) {
    const Json& g = j["rr_grid"];
    if (has(g, "positions")) {
      for (std::size_t i = 0; i < g["positions"].size(); ++i) {
        s.rr_grid.positions.push_back(read_vec3(g["positions"][i], join("rr_grid.positions", i)));
      }
    }
    if (has(g, "yaws")) {
      const Eigen::VectorXd y = read_vector(g["yaws"], "rr_grid.yaws");
      s.rr_grid.yaws.assign(y.data(), y.data() + y.size());
    }
    if (has(g, "workspace_center")) s.rr_grid.workspace_center = read_vec3(g["workspace_center"], "rr_grid.workspace_center");
  }

  if (has(j, "config")) {
    const Json& c = j["config"];
    PlannerConfig& k = s.config;
    k.seed = count_or(c, "seed", "config", k.seed);
    k.budget_s = positive_or(c, "budget_s", "config", k.budget_s);
    k.comfort_threshold = number_or(c, "comfort_threshold", "config", k.comfort_threshold);
    k.goal_samples = count_or(c, "goal_samples", "config", k.goal_samples);
    k.grasp_spacing = positive_or(c, "grasp_spacing", "config", k.grasp_spacing);
    k.w_rot = number_or(c, "w_rot", "config", k.w_rot);
    k.joint_speed = positive_or(c, "joint_speed", "config", k.joint_speed);
    k.max_transfer_attempts = count_or(c, "max_transfer_attempts", "config", k.max_transfer_attempts);
    k.attempt_budget_s = positive_or(c, "attempt_budget_s", "config", k.attempt_budget_s);
    if (!(k.comfort_threshold > 0.0 && k.comfort_threshold < 1.0)) {
      throw Error(ErrorCode::ParseError, "config.comfort_threshold: must lie in (0, 1)");
    }
  }
  s.validate();
  return s;
}

Scene load_scene(const std::string& path) {
  const Json j = read_json_file(path);
  return scene_from_json(j, fs::path(path).parent_path().string());
}

Json scene_to_json(const Scene& s) {
  Json boards = Json::array();
  for (const auto& b : s.boards) {
    Json e = to_json(b.spec);
    e["initial"] = to_json(b.initial);
    e["target"] = to_json(b.target);
    boards.push_back(e);
  }
  Json positions = Json::array();
  for (const auto& p : s.rr_grid.positions) positions.push_back(to_json(p));
  const PlannerConfig& k = s.config;
  const HumanModel& m = s.human.model;
  return Json{
      {"robot", {{"receiving", arm_to_json(s.receiving)}, {"suction", arm_to_json(s.suction)}}},
      {"gripper",
       {{"max_opening", s.gripper.max_opening},
        {"ee_length", s.gripper.ee_length},
        {"grip_force", s.gripper.grip_force},
        {"pad", to_json(s.gripper.pad)}}},
      {"human",
       {{"body", to_json(s.human.body)},
        {"stance", to_json(s.human.stance)},
        {"pad", to_json(m.pad)},
        {"grip_force", m.grip_force},
        {"max_opening", m.max_opening},
        {"grasp_spacing", m.grasp_spacing}}},
      {"tool",
       {{"length", s.tool.length},
        {"radius", s.tool.radius},
        {"initial", to_json(s.tool.initial_pose)},
        {"yaw_samples", s.tool.yaw_samples}}},
      {"boards", boards},
      {"sequence", s.sequence},
      {"workspace", to_json(s.workspace)},
      {"finished", s.finished},
      {"rr_grid",
       {{"positions", positions}, {"yaws", s.rr_grid.yaws}, {"workspace_center", to_json(s.rr_grid.workspace_center)}}},
      {"config",
       {{"seed", k.seed},
        {"budget_s", k.budget_s},
        {"comfort_threshold", k.comfort_threshold},
        {"goal_samples", k.goal_samples},
        {"grasp_spacing", k.grasp_spacing},
        {"w_rot", k.w_rot},
        {"joint_speed", k.joint_speed},
        {"max_transfer_attempts", k.max_transfer_attempts},
        {"attempt_budget_s", k.attempt_budget_s}}}};
}

void save_scene(const Scene& scene, const std::string& path) { write_json_file(path, scene_to_json(scene)); }

}  // namespace hrc
