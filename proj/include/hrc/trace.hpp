#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrc/error.hpp"
#include "hrc/handover.hpp"

namespace hrc {

struct BoardTrace {
  std::string board_id;
  std::uint64_t seed = 0;
  std::vector<HandoverPlanStep> steps;
  std::vector<double> timestamps;  ///< per waypoint of the constrained move
  SlipAnalysis slip;
  HandoverDiagnostics diagnostics;
  double seconds = 0.0;
};

struct TraceFailure {
  std::string board_id;
  ErrorCode code = ErrorCode::PlanningFailed;
  std::string message;
};

struct PlanTrace {
  std::uint64_t seed = 0;
  std::vector<BoardTrace> boards;
  std::optional<TraceFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Seed used for the k-th board of an assembly run.
std::uint64_t board_seed(std::uint64_t seed, std::size_t k);

/// Plans one board against the scene as given.
BoardTrace plan_board(const Scene& scene, const std::string& board_id, std::uint64_t seed);

/// Walks the assembly sequence; each completed board joins the finished
/// assembly before the next is planned. Stops at the first failure, which is
/// recorded in the trace.
PlanTrace run_assembly(const Scene& scene, std::uint64_t seed);

Json to_json(const GraspCandidate& g);
GraspCandidate read_grasp(const Json& j, const std::string& path);
Json to_json(const MotionPlan& plan);
MotionPlan read_motion_plan(const Json& j, const std::string& path);
Json to_json(const HandoverPlanStep& step);
HandoverPlanStep read_step(const Json& j, const std::string& path);
Json to_json(const SlipAnalysis& slip);
Json to_json(const PlanTrace& trace);
PlanTrace trace_from_json(const Json& j);
PlanTrace load_trace(const std::string& path);
void save_trace(const PlanTrace& trace, const std::string& path);

struct TraceReport {
  std::vector<std::string> errors;
  std::size_t boards_checked = 0;
  std::size_t plans_checked = 0;

  bool ok() const { return errors.empty(); }
};

/// Replays a trace against its scene: board order, step chaining, grasp
/// feasibility, slip limits and dense plan validation.
TraceReport validate_trace(const PlanTrace& trace, const Scene& scene);

}  // namespace hrc
