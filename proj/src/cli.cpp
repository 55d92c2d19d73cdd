#include "hrc/cli.hpp"

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hrc/error.hpp"
#include "hrc/trace.hpp"

namespace hrc {

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> budget_s;
  std::optional<double> comfort_threshold;
  std::optional<double> grip_force;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--budget-s", budget_s, "planner time budget per query [s]")->check(CLI::PositiveNumber);
    cmd->add_option("--comfort-threshold", comfort_threshold, "human comfort threshold")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--grip-force", grip_force, "robot grip force per finger [N]")->check(CLI::PositiveNumber);
  }

  void apply(Scene& s) const {
    if (seed) s.config.seed = *seed;
    if (budget_s) s.config.budget_s = *budget_s;
    if (comfort_threshold) {
      if (!(*comfort_threshold > 0.0 && *comfort_threshold < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "--comfort-threshold must lie in (0, 1)");
      }
      s.config.comfort_threshold = *comfort_threshold;
    }
    if (grip_force) s.gripper.grip_force = *grip_force;
  }
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::PlanningFailed:
    case ErrorCode::NoBimanualPose:
    case ErrorCode::NoHandoverPose:
    case ErrorCode::SamplingExhausted:
    case ErrorCode::InvalidEndpoint:
    case ErrorCode::ForceBudgetExceeded:
      return 1;
    default:
      return 2;
  }
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Scene load(const std::string& path, const Overrides& o) {
  Scene s = load_scene(path);
  o.apply(s);
  return s;
}

void print_board(std::ostream& out, const BoardTrace& b) {
  const auto& d = b.diagnostics;
  out << b.board_id << ": |S|=" << d.comfortable << " |SS|=" << d.shared
      << " chosen=" << (d.chosen_index ? std::to_string(*d.chosen_index) : "-")
      << " rejected=" << d.sampling.rejected() << " limit=" << fmt("%.2f", rad2deg(b.slip.relaxation_limit))
      << "deg waypoints=" << (b.steps.size() > 2 && b.steps[2].motion ? b.steps[2].motion->waypoints.size() : 0)
      << " time=" << fmt("%.2f", b.seconds) << "s\n";
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Handover planning for cabinet assembly", "hrcplan"};
  app.require_subcommand(1);

  Overrides ov;
  std::string scene_path, out_path, board_id, trace_path, axis = "longitudinal";
  std::size_t n = 0;

  auto* plan = app.add_subcommand("plan", "plan the full assembly sequence");
  plan->add_option("--scene", scene_path, "scene file")->required();
  plan->add_option("--out", out_path, "trace output file");
  ov.add_to(plan);

  auto* plan_board_cmd = app.add_subcommand("plan-board", "plan a single board");
  plan_board_cmd->add_option("--scene", scene_path, "scene file")->required();
  plan_board_cmd->add_option("--board", board_id, "board id")->required();
  plan_board_cmd->add_option("--out", out_path, "trace output file");
  ov.add_to(plan_board_cmd);

  auto* slip = app.add_subcommand("slip-analyze", "gravity torque curve and relaxation limit");
  slip->add_option("--scene", scene_path, "scene file")->required();
  slip->add_option("--board", board_id, "board id")->required();
  slip->add_option("--grasp-axis", axis, "longitudinal or transverse")
      ->check(CLI::IsMember({"longitudinal", "transverse"}));
  ov.add_to(slip);

  auto* comfort = app.add_subcommand("comfort-map", "human comfort of sampled goal poses");
  comfort->add_option("--scene", scene_path, "scene file")->required();
  comfort->add_option("--board", board_id, "board id")->required();
  comfort->add_option("--pose-samples", n, "number of poses")->required();
  ov.add_to(comfort);

  auto* goals = app.add_subcommand("sample-goals", "sample poses around the assembly target");
  goals->add_option("--scene", scene_path, "scene file")->required();
  goals->add_option("--board", board_id, "board id")->required();
  goals->add_option("-n", n, "number of poses")->required();
  goals->add_option("--out", out_path, "output file");
  ov.add_to(goals);

  auto* validate = app.add_subcommand("validate", "replay a trace against its scene");
  validate->add_option("--trace", trace_path, "trace file")->required();
  validate->add_option("--scene", scene_path, "scene file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*plan) {
      const Scene scene = load(scene_path, ov);
      const PlanTrace trace = run_assembly(scene, scene.config.seed);
      for (const auto& b : trace.boards) print_board(out, b);
      if (!out_path.empty()) save_trace(trace, out_path);
      if (trace.failure) {
        err << "board " << trace.failure->board_id << ": " << trace.failure->message << "\n";
        return exit_code(trace.failure->code);
      }
      out << "planned " << trace.boards.size() << " boards\n";
      return 0;
    }
    if (*plan_board_cmd) {
      const Scene scene = load(scene_path, ov);
      PlanTrace trace;
      trace.seed = scene.config.seed;
      trace.boards.push_back(plan_board(scene, board_id, scene.config.seed));
      print_board(out, trace.boards.front());
      if (!out_path.empty()) save_trace(trace, out_path);
      return 0;
    }
    if (*slip) {
      const Scene scene = load(scene_path, ov);
      const BoardSpec& board = scene.board(board_id).spec;
      const auto cands = generate_candidates(board, Owner::RobotLeft, scene.gripper.max_opening,
                                             scene.config.grasp_spacing);
      if (cands.grasps.empty()) throw Error(ErrorCode::InvalidArgument, "board does not fit the gripper");
      const GraspCandidate g = canonical_grasp(cands, axis_from_string(axis));
      const GraspGeometry geo = grasp_geometry(board, g, scene.gripper.ee_length);
      const SlipAnalysis a = relaxation_limit(geo, scene.gripper.pad, scene.gripper.grip_force);
      out << "# board " << board.id << " axis " << axis << " d=" << fmt("%.4f", geo.com_offset)
          << " m=" << fmt("%.3f", geo.mass) << " P=" << fmt("%.6g", scene.gripper.grip_force) << "\n";
      out << "theta_deg\ttorque_Nm\tbudget_Nm\tlimit_deg\n";
      for (std::size_t i = 0; i < a.torque_curve.size(); ++i) {
        out << fmt("%.0f", rad2deg(a.torque_curve[i].first)) << "\t" << fmt("%.6g", a.torque_curve[i].second)
            << "\t" << fmt("%.6g", a.budget_curve[i]) << "\t" << fmt("%.4f", rad2deg(a.relaxation_limit)) << "\n";
      }
      out << "critical_inclination_deg " << fmt("%.4f", rad2deg(a.theta_c)) << "\n";
      out << "relaxation_limit_deg " << fmt("%.4f", rad2deg(a.relaxation_limit)) << "\n";
      return 0;
    }
    if (*comfort) {
      const Scene scene = load(scene_path, ov);
      const BoardPlacement& b = scene.board(board_id);
      const auto poses =
          sample_goal_poses(b.spec, b.target, scene.finished_boxes(), n, scene.config.seed);
      out << "index\tx\ty\tz\tbest\towner\tgrasp\n";
      for (std::size_t i = 0; i < poses.size(); ++i) {
        const auto scores = score_pose(b.spec, poses[i], scene.human.model, scene.human_obstacles());
        const ComfortScore* best = nullptr;
        for (const auto& s : scores) {
          if (!best || s.value > best->value) best = &s;
        }
        out << i << "\t" << fmt("%.4f", poses[i].p.x()) << "\t" << fmt("%.4f", poses[i].p.y()) << "\t"
            << fmt("%.4f", poses[i].p.z()) << "\t" << fmt("%.6f", best ? best->value : 0.0) << "\t"
            << (best ? to_string(best->grasp.owner) : "-") << "\t" << (best ? best->grasp.index : -1) << "\n";
      }
      return 0;
    }
    if (*goals) {
      const Scene scene = load(scene_path, ov);
      const BoardPlacement& b = scene.board(board_id);
      GoalSamplingStats stats;
      const auto poses = sample_goal_poses(b.spec, b.target, scene.finished_boxes(), n, scene.config.seed, &stats);
      Json arr = Json::array();
      for (const auto& p : poses) arr.push_back(to_json(p));
      const Json doc{{"board", board_id},
                     {"seed", scene.config.seed},
                     {"attempts", stats.attempts},
                     {"rejected_rotation", stats.rejected_rotation},
                     {"rejected_translation", stats.rejected_translation},
                     {"rejected_collision", stats.rejected_collision},
                     {"poses", arr}};
      if (out_path.empty()) {
        out << dump_canonical(doc);
      } else {
        write_json_file(out_path, doc);
      }
      return 0;
    }
    if (*validate) {
      const Scene scene = load_scene(scene_path);
      const PlanTrace trace = load_trace(trace_path);
      const TraceReport rep = validate_trace(trace, scene);
      for (const auto& e : rep.errors) err << e << "\n";
      out << "boards " << rep.boards_checked << ", plans " << rep.plans_checked << ": "
          << (rep.ok() ? "valid" : "INVALID") << "\n";
      if (!rep.ok()) return 1;
      return trace.failure ? 1 : 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace hrc
