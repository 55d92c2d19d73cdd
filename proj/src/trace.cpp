#include "hrc/trace.hpp"

#include <chrono>
#include <cmath>

#include "hrc/error.hpp"

namespace hrc {

std::uint64_t board_seed(std::uint64_t seed, std::size_t k) { return seed * 7919ULL + k; }

BoardTrace plan_board(const Scene& scene, const std::string& board_id, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  HandoverResult r = build_handover_plan(scene, board_id, seed);
  BoardTrace bt;
  bt.board_id = board_id;
  bt.seed = seed;
  bt.steps = std::move(r.steps);
  bt.slip = std::move(r.slip);
  bt.diagnostics = std::move(r.diagnostics);
  for (const auto& s : bt.steps) {
    if (s.motion) bt.timestamps = plan_timestamps(*s.motion, scene.config.joint_speed);
  }
  bt.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return bt;
}

PlanTrace run_assembly(const Scene& input, std::uint64_t seed) {
  Scene scene = input;
  PlanTrace trace;
  trace.seed = seed;
  for (std::size_t k = 0; k < scene.sequence.size(); ++k) {
    const std::string& id = scene.sequence[k];
    try {
      trace.boards.push_back(plan_board(scene, id, board_seed(seed, k)));
    } catch (const Error& e) {
      trace.failure = TraceFailure{id, e.code(), e.what()};
      break;
    }
    scene.finished.push_back(id);
  }
  return trace;
}

// ---------------------------------------------------------------------------
// serialization

Json to_json(const GraspCandidate& g) {
  return Json{{"owner", to_string(g.owner)},     {"contact_center", to_json(g.contact_center)},
              {"approach", to_json(g.approach)}, {"opening_dir", to_json(g.opening_dir)},
              {"width", g.width},                {"axis_tag", to_string(g.axis_tag)},
              {"index", g.index}};
}

GraspCandidate read_grasp(const Json& j, const std::string& path) {
  GraspCandidate g;
  try {
    g.owner = owner_from_string(read_string(field(j, "owner", path), join(path, "owner")));
    g.axis_tag = axis_from_string(read_string(field(j, "axis_tag", path), join(path, "axis_tag")));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  g.contact_center = read_vec3(field(j, "contact_center", path), join(path, "contact_center"));
  g.approach = read_vec3(field(j, "approach", path), join(path, "approach"));
  g.opening_dir = read_vec3(field(j, "opening_dir", path), join(path, "opening_dir"));
  g.width = read_number(field(j, "width", path), join(path, "width"));
  g.index = static_cast<int>(read_number(field(j, "index", path), join(path, "index")));
  return g;
}

Json to_json(const MotionPlan& plan) {
  Json wps = Json::array();
  for (const auto& q : plan.waypoints) wps.push_back(to_json(q));
  Json j{{"arm", plan.arm},
         {"constraint",
          {{"limit", plan.constraint.limit},
           {"opening_tcp", to_json(plan.constraint.opening_tcp)},
           {"com_dir_tcp", to_json(plan.constraint.com_dir_tcp)}}},
         {"waypoints", wps}};
  if (plan.attached) {
    j["attached"] = Json{{"board_id", plan.attached->board_id},
                         {"grasp", to_json(plan.attached->grasp)},
                         {"box", to_json(plan.attached->in_tcp)}};
  }
  return j;
}

MotionPlan read_motion_plan(const Json& j, const std::string& path) {
  MotionPlan m;
  m.arm = read_string(field(j, "arm", path), join(path, "arm"));
  const std::string cp = join(path, "constraint");
  const Json& c = field(j, "constraint", path);
  m.constraint.limit = read_angle(field(c, "limit", cp), join(cp, "limit"));
  m.constraint.opening_tcp = read_vec3(field(c, "opening_tcp", cp), join(cp, "opening_tcp"));
  m.constraint.com_dir_tcp = read_vec3(field(c, "com_dir_tcp", cp), join(cp, "com_dir_tcp"));
  const std::string wp = join(path, "waypoints");
  const Json& w = field(j, "waypoints", path);
  for (std::size_t i = 0; i < w.size(); ++i) m.waypoints.push_back(read_vector(w[i], join(wp, i)));
  if (has(j, "attached")) {
    const std::string ap = join(path, "attached");
    const Json& a = j["attached"];
    m.attached = AttachedObject{read_string(field(a, "board_id", ap), join(ap, "board_id")),
                                read_grasp(field(a, "grasp", ap), join(ap, "grasp")),
                                read_obb(field(a, "box", ap), join(ap, "box"))};
  }
  return m;
}

Json to_json(const HandoverPlanStep& s) {
  Json j{{"kind", to_string(s.kind)},
         {"actor", s.actor},
         {"object", s.object},
         {"start", to_json(s.start)},
         {"end", to_json(s.end)},
         {"actor_q", to_json(s.actor_q)}};
  if (s.grasp) j["grasp"] = to_json(*s.grasp);
  if (s.suction) {
    j["suction"] = Json{{"tcp_in_object", to_json(s.suction->tcp_in_object)},
                        {"yaw", s.suction->yaw},
                        {"q", to_json(s.suction->q)}};
  }
  if (s.motion) j["motion"] = to_json(*s.motion);
  return j;
}

HandoverPlanStep read_step(const Json& j, const std::string& path) {
  HandoverPlanStep s;
  try {
    s.kind = step_kind_from_string(read_string(field(j, "kind", path), join(path, "kind")));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  s.actor = read_string(field(j, "actor", path), join(path, "actor"));
  s.object = read_string(field(j, "object", path), join(path, "object"));
  s.start = read_pose(field(j, "start", path), join(path, "start"));
  s.end = read_pose(field(j, "end", path), join(path, "end"));
  s.actor_q = read_vector(field(j, "actor_q", path), join(path, "actor_q"));
  if (has(j, "grasp")) s.grasp = read_grasp(j["grasp"], join(path, "grasp"));
  if (has(j, "suction")) {
    const std::string sp = join(path, "suction");
    const Json& a = j["suction"];
    s.suction = SuctionAttach{read_pose(field(a, "tcp_in_object", sp), join(sp, "tcp_in_object")),
                              read_angle(field(a, "yaw", sp), join(sp, "yaw")),
                              read_vector(field(a, "q", sp), join(sp, "q"))};
  }
  if (has(j, "motion")) s.motion = read_motion_plan(j["motion"], join(path, "motion"));
  return s;
}

Json to_json(const SlipAnalysis& slip) {
  Json torque = Json::array();
  for (const auto& [t, v] : slip.torque_curve) torque.push_back(Json::array({t, v}));
  Json budget = slip.budget_curve;
  return Json{{"theta_c", slip.theta_c},
              {"relaxation_limit", slip.relaxation_limit},
              {"friction_budget", slip.friction_budget},
              {"torque_curve", torque},
              {"budget_curve", budget}};
}

namespace {

SlipAnalysis read_slip(const Json& j, const std::string& path) {
  SlipAnalysis s;
  s.theta_c = read_number(field(j, "theta_c", path), join(path, "theta_c"));
  s.relaxation_limit = read_number(field(j, "relaxation_limit", path), join(path, "relaxation_limit"));
  s.friction_budget = read_number(field(j, "friction_budget", path), join(path, "friction_budget"));
  if (has(j, "torque_curve")) {
    for (std::size_t i = 0; i < j["torque_curve"].size(); ++i) {
      const std::string p = join(join(path, "torque_curve"), i);
      const Json& e = j["torque_curve"][i];
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::ParseError, p + ": expected a pair");
      s.torque_curve.emplace_back(read_number(e[0], p), read_number(e[1], p));
    }
  }
  if (has(j, "budget_curve")) {
    const Eigen::VectorXd b = read_vector(j["budget_curve"], join(path, "budget_curve"));
    s.budget_curve.assign(b.data(), b.data() + b.size());
  }
  return s;
}

Json diagnostics_json(const HandoverDiagnostics& d) {
  Json attempts = Json::array();
  for (const auto& a : d.attempts) {
    attempts.push_back(Json{{"candidate", a.candidate}, {"grasp_index", a.grasp_index}, {"outcome", a.outcome}});
  }
  Json j{{"sampled", d.sampled},
         {"sampling_attempts", d.sampling.attempts},
         {"rejected_rotation", d.sampling.rejected_rotation},
         {"rejected_translation", d.sampling.rejected_translation},
         {"rejected_collision", d.sampling.rejected_collision},
         {"comfortable", d.comfortable},
         {"shared", d.shared},
         {"ordered_quality", d.ordered_quality},
         {"attempts", attempts}};
  j["chosen_index"] = d.chosen_index ? Json(*d.chosen_index) : Json(nullptr);
  return j;
}

HandoverDiagnostics read_diagnostics(const Json& j) {
  HandoverDiagnostics d;
  auto count = [&](const char* k) { return has(j, k) ? j[k].get<std::size_t>() : std::size_t{0}; };
  d.sampled = count("sampled");
  d.sampling.attempts = count("sampling_attempts");
  d.sampling.rejected_rotation = count("rejected_rotation");
  d.sampling.rejected_translation = count("rejected_translation");
  d.sampling.rejected_collision = count("rejected_collision");
  d.comfortable = count("comfortable");
  d.shared = count("shared");
  if (has(j, "ordered_quality")) d.ordered_quality = j["ordered_quality"].get<std::vector<double>>();
  if (has(j, "chosen_index") && !j["chosen_index"].is_null()) d.chosen_index = j["chosen_index"].get<std::size_t>();
  if (has(j, "attempts")) {
    for (const auto& a : j["attempts"]) {
      d.attempts.push_back({a["candidate"].get<std::size_t>(), a["grasp_index"].get<int>(),
                            a["outcome"].get<std::string>()});
    }
  }
  return d;
}

}  // namespace

Json to_json(const PlanTrace& trace) {
  Json boards = Json::array();
  for (const auto& b : trace.boards) {
    Json steps = Json::array();
    for (const auto& s : b.steps) steps.push_back(to_json(s));
    boards.push_back(Json{{"board", b.board_id},
                          {"seed", b.seed},
                          {"steps", steps},
                          {"timestamps", b.timestamps},
                          {"slip", to_json(b.slip)},
                          {"diagnostics", diagnostics_json(b.diagnostics)},
                          {"seconds", b.seconds}});
  }
  Json j{{"seed", trace.seed}, {"boards", boards}};
  if (trace.failure) {
    j["failure"] = Json{{"board", trace.failure->board_id},
                        {"code", to_string(trace.failure->code)},
                        {"message", trace.failure->message}};
  }
  return j;
}

PlanTrace trace_from_json(const Json& j) {
  PlanTrace t;
  const Json& seed = field(j, "seed", "");
  if (!seed.is_number_unsigned()) throw Error(ErrorCode::ParseError, "seed: expected a non-negative integer");
  t.seed = seed.get<std::uint64_t>();
  const Json& boards = field(j, "boards", "");
  for (std::size_t i = 0; i < boards.size(); ++i) {
    const std::string p = join("boards", i);
    const Json& b = boards[i];
    BoardTrace bt;
    bt.board_id = read_string(field(b, "board", p), join(p, "board"));
    if (has(b, "seed")) bt.seed = b["seed"].get<std::uint64_t>();
    const Json& steps = field(b, "steps", p);
    for (std::size_t k = 0; k < steps.size(); ++k) bt.steps.push_back(read_step(steps[k], join(join(p, "steps"), k)));
    if (has(b, "timestamps")) bt.timestamps = b["timestamps"].get<std::vector<double>>();
    if (has(b, "slip")) bt.slip = read_slip(b["slip"], join(p, "slip"));
    if (has(b, "diagnostics")) bt.diagnostics = read_diagnostics(b["diagnostics"]);
    if (has(b, "seconds")) bt.seconds = read_number(b["seconds"], join(p, "seconds"));
    t.boards.push_back(std::move(bt));
  }
  if (has(j, "failure")) {
    const Json& f = j["failure"];
    t.failure = TraceFailure{read_string(field(f, "board", "failure"), "failure.board"), ErrorCode::PlanningFailed,
                             has(f, "message") ? f["message"].get<std::string>() : ""};
  }
  return t;
}

PlanTrace load_trace(const std::string& path) {
  try {
    return trace_from_json(read_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void save_trace(const PlanTrace& trace, const std::string& path) { write_json_file(path, to_json(trace)); }

// ---------------------------------------------------------------------------
// replay

namespace {

bool same_pose(const Pose& a, const Pose& b, double tol) {
  return (a.p - b.p).norm() <= tol && rotation_distance(a.R, b.R) <= tol;
}

const SerialChain* chain_named(const Scene& scene, const std::string& name) {
  for (const SerialChain* c : {&scene.receiving.chain, &scene.suction.chain, &scene.human.model.left,
                               &scene.human.model.right}) {
    if (c->name == name) return c;
  }
  return nullptr;
}

}  // namespace

TraceReport validate_trace(const PlanTrace& trace, const Scene& input) {
  TraceReport rep;
  Scene scene = input;
  auto err = [&](const std::string& board, const std::string& msg) { rep.errors.push_back(board + ": " + msg); };
  const StepKind order[4] = {StepKind::SuctionPick, StepKind::RobotRobotTransfer, StepKind::ConstrainedMove,
                             StepKind::HumanRelease};
  constexpr double kPoseTol = 1e-9;
  constexpr double kFkTol = 1e-3;

  if (trace.boards.size() > scene.sequence.size()) rep.errors.push_back("trace has more boards than the scene");
  for (std::size_t k = 0; k < trace.boards.size() && k < scene.sequence.size(); ++k) {
    const BoardTrace& bt = trace.boards[k];
    ++rep.boards_checked;
    if (bt.board_id != scene.sequence[k]) {
      err(bt.board_id, "out of assembly order (expected '" + scene.sequence[k] + "')");
      break;
    }
    const BoardPlacement& placement = scene.board(bt.board_id);
    const BoardSpec& board = placement.spec;
    if (bt.steps.size() != 4) {
      err(bt.board_id, "expected 4 steps, found " + std::to_string(bt.steps.size()));
      scene.finished.push_back(bt.board_id);
      continue;
    }
    for (int i = 0; i < 4; ++i) {
      const auto& s = bt.steps[static_cast<std::size_t>(i)];
      if (s.kind != order[i]) err(bt.board_id, std::string("step ") + std::to_string(i) + " is " + to_string(s.kind));
      if (s.object != bt.board_id) err(bt.board_id, "step object mismatch");
      if (i > 0 && !same_pose(bt.steps[static_cast<std::size_t>(i - 1)].end, s.start, kPoseTol)) {
        err(bt.board_id, "steps " + std::to_string(i - 1) + " and " + std::to_string(i) + " do not chain");
      }
    }
    if (!same_pose(bt.steps[0].start, placement.initial, 1e-6)) err(bt.board_id, "does not start at its initial pose");

    const auto grasp_obstacles = scene.robot_grasp_obstacles();
    const auto human_obstacles = scene.human_obstacles();
    const PlanningScene planning = scene.robot_scene();

    for (const auto& s : bt.steps) {
      const SerialChain* chain = chain_named(scene, s.actor);
      if (!chain) {
        err(bt.board_id, "unknown actor '" + s.actor + "'");
        continue;
      }
      if (static_cast<std::size_t>(s.actor_q.size()) != chain->dof()) {
        err(bt.board_id, std::string(to_string(s.kind)) + ": configuration size mismatch");
        continue;
      }
      if (s.kind == StepKind::SuctionPick) {
        if (!s.suction) {
          err(bt.board_id, "suction-pick without a suction record");
          continue;
        }
        const Pose tcp = forward_kinematics(*chain, s.suction->q);
        if (!same_pose(tcp, s.end * s.suction->tcp_in_object, kFkTol)) err(bt.board_id, "suction arm does not reach the tool");
        continue;
      }
      if (!s.grasp) {
        err(bt.board_id, std::string(to_string(s.kind)) + " without a grasp");
        continue;
      }
      const bool human = s.kind == StepKind::HumanRelease;
      FeasibilityOptions opts;
      opts.seeds = {s.actor_q};
      const GraspCandidate g[1] = {*s.grasp};
      const GraspSet set = feasible_grasps(board, s.end, g, *chain, human ? human_obstacles : grasp_obstacles, opts);
      if (set.empty()) err(bt.board_id, std::string(to_string(s.kind)) + ": grasp is not feasible at its pose");
      if (human && !check_human_grasp_stability(*s.grasp, board, s.end, scene.human.model.pad,
                                                scene.human.model.grip_force)) {
        err(bt.board_id, "human grasp is not stable");
      }
      if (s.kind == StepKind::ConstrainedMove) {
        if (!s.motion) {
          err(bt.board_id, "constrained-move without a motion plan");
          continue;
        }
        ++rep.plans_checked;
        const MotionPlan& m = *s.motion;
        if (m.waypoints.empty()) {
          err(bt.board_id, "empty motion plan");
          continue;
        }
        const InclinationConstraint expected = transfer_constraint(board, *s.grasp, scene.transfer_setup());
        if (std::abs(expected.limit - m.constraint.limit) > 1e-9) err(bt.board_id, "constraint differs from the slip limit");
        const Pose tcp_obj = s.grasp->tcp_in_object();
        if (!same_pose(forward_kinematics(*chain, m.waypoints.front()), s.start * tcp_obj, kFkTol) ||
            !same_pose(forward_kinematics(*chain, m.waypoints.back()), s.end * tcp_obj, kFkTol)) {
          err(bt.board_id, "motion plan endpoints do not match the step poses");
        }
        const ValidationReport v = validate_plan(m, *chain, planning);
        if (!v.ok()) err(bt.board_id, "motion plan fails dense validation");
        if (bt.timestamps.size() != m.waypoints.size()) err(bt.board_id, "timestamp count mismatch");
        for (std::size_t i = 1; i < bt.timestamps.size(); ++i) {
          if (bt.timestamps[i] < bt.timestamps[i - 1]) err(bt.board_id, "timestamps decrease");
        }
      }
    }
    scene.finished.push_back(bt.board_id);
  }
  if (!trace.failure && trace.boards.size() != input.sequence.size()) {
    rep.errors.push_back("trace is incomplete without a recorded failure");
  }
  return rep;
}

}  // namespace hrc
