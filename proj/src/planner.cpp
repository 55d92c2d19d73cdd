#include "hrc/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "hrc/error.hpp"

namespace hrc {
namespace {

using Clock = std::chrono::steady_clock;

JointConfig lerp(const JointConfig& a, const JointConfig& b, double t) { return t >= 1.0 ? b : JointConfig(a + t * (b - a)); }

int steps_for(const JointConfig& a, const JointConfig& b, double step) {
  const double span = (b - a).cwiseAbs().maxCoeff();
  return std::max(1, static_cast<int>(std::ceil(span / step)));
}

struct Tree {
  std::vector<JointConfig> q;
  std::vector<int> parent;

  int add(const JointConfig& x, int p) {
    q.push_back(x);
    parent.push_back(p);
    return static_cast<int>(q.size()) - 1;
  }

  int nearest(const JointConfig& x) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double d = (q[i] - x).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  std::vector<JointConfig> path_to_root(int i) const {
    std::vector<JointConfig> out;
    for (; i >= 0; i = parent[i]) out.push_back(q[i]);
    return out;
  }
};

enum class Extend { Trapped, Advanced, Reached };

}  // namespace

double inclination_of_rotation(const Mat3& R, const InclinationConstraint& c) {
  if (c.torque_aware()) {
    const Vec3 hinge = R * c.opening_tcp.cross(c.com_dir_tcp).normalized();
    return std::asin(std::min(1.0, std::abs(hinge.z())));
  }
  const Vec3 opening = R * c.opening_tcp.normalized();
  return std::acos(std::min(1.0, std::abs(opening.z())));
}

double inclination_of(const SerialChain& chain, const JointConfig& q) {
  return inclination_of(chain, q, InclinationConstraint{});
}

double inclination_of(const SerialChain& chain, const JointConfig& q, const InclinationConstraint& c) {
  return inclination_of_rotation(forward_kinematics(chain, q).R, c);
}

AttachedObject attach_board(const BoardSpec& board, const GraspCandidate& grasp) {
  return {board.id, grasp, Obb{grasp.tcp_in_object().inverse(), board.half_extents()}};
}

StateValidator::StateValidator(const SerialChain& chain, const InclinationConstraint& constraint,
                               const PlanningScene& scene, const std::optional<AttachedObject>& attached)
    : chain_(chain), constraint_(constraint), scene_(scene), attached_(attached) {}

bool StateValidator::limits_ok(const JointConfig& q) const { return chain_.within_limits(q); }

bool StateValidator::constraint_ok(const JointConfig& q) const {
  if (constraint_.limit >= kPi / 2.0) return true;
  return inclination_of(chain_, q, constraint_) <= constraint_.limit;
}

bool StateValidator::collision_free(const JointConfig& q) const {
  const auto frames = joint_frames(chain_, q);
  const auto links = link_volumes(chain_, q);
  for (const auto& v : links) {
    if (intersects_any(v, scene_.obstacles)) return false;
  }
  if (attached_) {
    const Obb board = attached_->in_tcp.transformed(frames.back());
    if (intersects_any(board, scene_.obstacles)) return false;
    for (const auto& v : links) {
      if (intersects(board, v)) return false;
    }
  }
  return true;
}

bool StateValidator::valid(const JointConfig& q) const {
  return limits_ok(q) && constraint_ok(q) && collision_free(q);
}

bool StateValidator::edge_valid(const JointConfig& a, const JointConfig& b, double step) const {
  const int n = steps_for(a, b, step);
  for (int k = 0; k <= n; ++k) {
    if (!valid(lerp(a, b, static_cast<double>(k) / n))) return false;
  }
  return true;
}

MotionPlan plan_constrained(const SerialChain& chain, const JointConfig& start, const JointConfig& goal,
                            const InclinationConstraint& constraint, const PlanningScene& scene,
                            const std::optional<AttachedObject>& attached, const PlannerOptions& opt,
                            PlanStats* stats) {
  const auto t0 = Clock::now();
  const StateValidator endpoint_check(chain, constraint, scene, attached);
  InclinationConstraint tightened = constraint;
  if (constraint.limit < kPi / 2.0) tightened.limit = std::max(0.0, constraint.limit - opt.constraint_margin);
  const StateValidator strict_check(chain, tightened, scene, attached);
  if (static_cast<std::size_t>(start.size()) != chain.dof() ||
      static_cast<std::size_t>(goal.size()) != chain.dof()) {
    throw Error(ErrorCode::DimensionMismatch, "planning endpoints do not match the chain");
  }
  if (!endpoint_check.valid(start)) throw Error(ErrorCode::InvalidEndpoint, "start configuration is invalid");
  if (!endpoint_check.valid(goal)) throw Error(ErrorCode::InvalidEndpoint, "goal configuration is invalid");
  // Endpoints inside the margin band fall back to the nominal bound.
  const bool use_margin = strict_check.constraint_ok(start) && strict_check.constraint_ok(goal);
  const StateValidator& check = use_margin ? strict_check : endpoint_check;

  MotionPlan plan;
  plan.arm = chain.name;
  plan.constraint = constraint;
  plan.attached = attached;
  PlanStats local;

  std::vector<JointConfig> path, raw;
  if ((start - goal).cwiseAbs().maxCoeff() == 0.0) {
    path.push_back(start);
  } else if (check.edge_valid(start, goal, opt.edge_step)) {
    path = {start, goal};
  } else {
    Rng rng(opt.seed);
    const JointConfig lo = chain.lower_limits();
    const JointConfig hi = chain.upper_limits();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto sample = [&] {
      JointConfig q(lo.size());
      for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = lo[i] + unit(rng) * (hi[i] - lo[i]);
      return q;
    };

    auto extend = [&](Tree& tree, const JointConfig& target, int& new_index) {
      const int near = tree.nearest(target);
      const JointConfig& from = tree.q[near];
      const JointConfig delta = target - from;
      const double dist = delta.norm();
      const bool reaches = dist <= opt.extend_step;
      const JointConfig to = reaches ? target : JointConfig(from + delta * (opt.extend_step / dist));
      if (!check.edge_valid(from, to, opt.edge_step)) return Extend::Trapped;
      new_index = tree.add(to, near);
      return reaches ? Extend::Reached : Extend::Advanced;
    };

    Tree ta, tb;
    ta.add(start, -1);
    tb.add(goal, -1);
    Tree* a = &ta;
    Tree* b = &tb;
    const auto deadline = t0 + std::chrono::duration<double>(opt.budget_s);
    bool found = false;
    int ia = -1, ib = -1;

    while (local.samples < opt.max_samples) {
      if (Clock::now() > deadline) break;
      ++local.samples;
      const JointConfig q = sample();
      if (!check.limits_ok(q) || !check.constraint_ok(q)) {
        ++local.rejected_constraint;
        continue;
      }
      if (!check.collision_free(q)) {
        ++local.rejected_collision;
        continue;
      }
      int added = -1;
      if (extend(*a, q, added) == Extend::Trapped) {
        std::swap(a, b);
        continue;
      }
      const JointConfig target = a->q[added];
      Extend res = Extend::Advanced;
      int bi = -1;
      while (res == Extend::Advanced) res = extend(*b, target, bi);
      if (res == Extend::Reached) {
        found = true;
        ia = added;
        ib = bi;
        break;
      }
      std::swap(a, b);
    }
    local.tree_nodes = ta.q.size() + tb.q.size();
    if (!found) {
      local.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
      if (stats) *stats = local;
      throw Error(ErrorCode::PlanningFailed, "no path within budget (" + std::to_string(local.samples) + " samples)");
    }
    // a holds `ia`, b holds `ib`; order the halves from start to goal.
    auto half_a = a->path_to_root(ia);
    auto half_b = b->path_to_root(ib);
    if (a != &ta) std::swap(half_a, half_b);
    std::reverse(half_a.begin(), half_a.end());
    path = std::move(half_a);
    // The connecting node duplicates the last node of the start half.
    path.insert(path.end(), half_b.begin() + 1, half_b.end());
    raw = path;

    for (int k = 0; k < opt.shortcut_attempts && path.size() > 2; ++k) {
      std::uniform_int_distribution<std::size_t> pick(0, path.size() - 1);
      std::size_t i = pick(rng), j = pick(rng);
      if (i > j) std::swap(i, j);
      if (j - i < 2) continue;
      if (check.edge_valid(path[i], path[j], opt.edge_step)) {
        path.erase(path.begin() + static_cast<std::ptrdiff_t>(i) + 1, path.begin() + static_cast<std::ptrdiff_t>(j));
      }
    }
  }

  auto densify = [&](const std::vector<JointConfig>& nodes) {
    plan.waypoints.assign(1, nodes.front());
    for (std::size_t k = 1; k < nodes.size(); ++k) {
      const int n = steps_for(nodes[k - 1], nodes[k], opt.max_waypoint_step);
      for (int s = 1; s <= n; ++s) plan.waypoints.push_back(lerp(nodes[k - 1], nodes[k], static_cast<double>(s) / n));
    }
    return validate_plan(plan, chain, scene, opt.edge_step / 2.0).ok();
  };
  // Shortened path first, then the raw tree path.
  const bool valid = densify(path) || (!raw.empty() && densify(raw));
  local.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (stats) *stats = local;
  if (!valid) throw Error(ErrorCode::PlanningFailed, "path failed dense re-validation");
  return plan;
}

InclinationConstraint transfer_constraint(const BoardSpec& board, const GraspCandidate& grasp,
                                          const TransferSetup& setup) {
  const GraspGeometry geom = grasp_geometry(board, grasp, setup.ee_length);
  const SlipAnalysis slip = setup.cache != nullptr
                                ? setup.cache->get_or_compute(board.id + "#" + std::to_string(grasp.index), geom,
                                                              setup.pad, setup.grip_force)
                                : relaxation_limit(geom, setup.pad, setup.grip_force);
  InclinationConstraint c;
  c.limit = slip.relaxation_limit;
  c.com_dir_tcp = com_direction_in_tcp(grasp);
  return c;
}

MotionPlan plan_object_transfer(const SerialChain& arm, const BoardSpec& board, const GraspCandidate& grasp,
                                const JointConfig& start_q, const JointConfig& goal_q,
                                const PlanningScene& scene, const TransferSetup& setup,
                                const PlannerOptions& options, PlanStats* stats) {
  const InclinationConstraint c = transfer_constraint(board, grasp, setup);
  const std::optional<AttachedObject> attached = attach_board(board, grasp);
  return plan_constrained(arm, start_q, goal_q, c, scene, attached, options, stats);
}

MotionPlan plan_object_transfer(const SerialChain& arm, const BoardSpec& board, const GraspCandidate& grasp,
                                const Pose& start_pose, const Pose& goal_pose, const PlanningScene& scene,
                                const TransferSetup& setup, const PlannerOptions& options, PlanStats* stats) {
  const Pose grip = grasp.tcp_in_object();
  const IkResult start = inverse_kinematics_multi(arm, start_pose * grip, {});
  if (!start.ok()) throw Error(ErrorCode::InvalidEndpoint, "no IK solution at the start pose");
  const IkResult goal = inverse_kinematics_multi(arm, goal_pose * grip, {start.q});
  if (!goal.ok()) throw Error(ErrorCode::InvalidEndpoint, "no IK solution at the goal pose");
  return plan_object_transfer(arm, board, grasp, start.q, goal.q, scene, setup, options, stats);
}

ValidationReport validate_plan(const MotionPlan& plan, const SerialChain& chain, const PlanningScene& scene,
                               double resolution, double tol) {
  ValidationReport report;
  InclinationConstraint relaxed = plan.constraint;
  const StateValidator check(chain, relaxed, scene, plan.attached);
  auto visit = [&](const JointConfig& q, double s) {
    ++report.states_checked;
    if (!check.limits_ok(q) && report.limits_ok) {
      report.limits_ok = false;
      report.first_limit_violation = s;
    }
    if (static_cast<std::size_t>(q.size()) != chain.dof()) return;
    const double incl = inclination_of(chain, q, plan.constraint);
    report.max_inclination = std::max(report.max_inclination, incl);
    if (plan.constraint.limit < kPi / 2.0 && incl > plan.constraint.limit + tol && report.constraint_ok) {
      report.constraint_ok = false;
      report.first_constraint_violation = s;
    }
    if (report.collision_ok && !check.collision_free(q)) {
      report.collision_ok = false;
      report.first_collision = s;
    }
  };
  if (plan.waypoints.empty()) return report;
  visit(plan.waypoints.front(), 0.0);
  for (std::size_t k = 1; k < plan.waypoints.size(); ++k) {
    const auto& a = plan.waypoints[k - 1];
    const auto& b = plan.waypoints[k];
    if (a.size() != b.size()) {
      report.limits_ok = false;
      if (!report.first_limit_violation) report.first_limit_violation = static_cast<double>(k);
      continue;
    }
    const int n = steps_for(a, b, resolution);
    for (int s = 1; s <= n; ++s) {
      const double t = static_cast<double>(s) / n;
      visit(lerp(a, b, t), static_cast<double>(k - 1) + t);
    }
  }
  return report;
}

std::vector<double> plan_timestamps(const MotionPlan& plan, double joint_speed) {
  std::vector<double> t;
  if (plan.waypoints.empty()) return t;
  t.push_back(0.0);
  for (std::size_t k = 1; k < plan.waypoints.size(); ++k) {
    const double d = (plan.waypoints[k] - plan.waypoints[k - 1]).cwiseAbs().maxCoeff();
    t.push_back(t.back() + d / joint_speed);
  }
  return t;
}

}  // namespace hrc
