#include "hrc/grasping.hpp"

#include <cmath>
#include <limits>

#include "hrc/error.hpp"

namespace hrc {

const char* to_string(Owner owner) {
  switch (owner) {
    case Owner::RobotLeft: return "robot-left";
    case Owner::RobotRight: return "robot-right";
    case Owner::HumanLeft: return "human-left";
    case Owner::HumanRight: return "human-right";
  }
  return "?";
}

const char* to_string(GraspAxis axis) {
  return axis == GraspAxis::Longitudinal ? "longitudinal" : "transverse";
}

Owner owner_from_string(const std::string& s) {
  for (Owner o : {Owner::RobotLeft, Owner::RobotRight, Owner::HumanLeft, Owner::HumanRight}) {
    if (s == to_string(o)) return o;
  }
  throw Error(ErrorCode::ParseError, "unknown grasp owner '" + s + "'");
}

GraspAxis axis_from_string(const std::string& s) {
  if (s == "longitudinal") return GraspAxis::Longitudinal;
  if (s == "transverse") return GraspAxis::Transverse;
  throw Error(ErrorCode::ParseError, "unknown grasp axis '" + s + "'");
}

void BoardSpec::validate() const {
  if (!(length >= width && width >= thickness && thickness > 0.0)) {
    throw Error(ErrorCode::InvariantViolation, "board '" + id + "' needs length >= width >= thickness > 0");
  }
  if (!(mass >= 0.0)) throw Error(ErrorCode::InvariantViolation, "board '" + id + "' has negative mass");
  if (!mesh().watertight()) throw Error(ErrorCode::InvariantViolation, "board '" + id + "' mesh not watertight");
}

Pose GraspCandidate::tcp_in_object() const {
  Mat3 R;
  R.col(0) = opening_dir.cross(approach);
  R.col(1) = opening_dir;
  R.col(2) = approach;
  return {contact_center, R};
}

bool GraspCandidate::same_grasp(const GraspCandidate& o) const {
  constexpr double tol = 1e-12;
  return owner == o.owner && (contact_center - o.contact_center).norm() < tol &&
         (approach - o.approach).norm() < tol && (opening_dir - o.opening_dir).norm() < tol &&
         std::abs(width - o.width) < tol;
}

CandidateList generate_candidates(const BoardSpec& board, Owner owner, double max_opening,
                                  double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "grasp spacing must be positive");
  CandidateList out;
  if (board.thickness > max_opening) {
    out.too_thick = true;
    return out;
  }
  auto count = [&](double extent) {
    return std::max(1, static_cast<int>(std::floor(extent / spacing + 1e-9)));
  };
  const int nx = count(board.length);
  const int ny = count(board.width);
  const Vec3 approaches[4] = {Vec3::UnitX(), -Vec3::UnitX(), Vec3::UnitY(), -Vec3::UnitY()};
  int index = 0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const Vec3 c((i - (nx - 1) / 2.0) * spacing, (j - (ny - 1) / 2.0) * spacing, 0.0);
      for (int k = 0; k < 4; ++k) {
        GraspCandidate g;
        g.owner = owner;
        g.contact_center = c;
        g.approach = approaches[k];
        g.opening_dir = Vec3::UnitZ();
        g.width = board.thickness;
        g.axis_tag = k < 2 ? GraspAxis::Longitudinal : GraspAxis::Transverse;
        g.index = index++;
        out.grasps.push_back(g);
      }
    }
  }
  return out;
}

const GraspEntry* GraspSet::find(const GraspCandidate& g) const {
  for (const auto& e : grasps) {
    if (e.grasp.same_grasp(g)) return &e;
  }
  return nullptr;
}

bool arm_in_collision(const SerialChain& chain, const JointConfig& q, const Obb& board_box,
                      std::span<const Obb> obstacles) {
  for (const auto& v : link_volumes(chain, q)) {
    if (intersects(v, board_box) || intersects_any(v, obstacles)) return true;
  }
  return false;
}

GraspSet feasible_grasps(const BoardSpec& board, const Pose& pose,
                         std::span<const GraspCandidate> candidates, const SerialChain& chain,
                         std::span<const Obb> obstacles, const FeasibilityOptions& options) {
  GraspSet set;
  set.board_id = board.id;
  set.object_pose = pose;
  if (!candidates.empty()) set.owner = candidates.front().owner;
  const Obb board_box = board.box_at(pose);
  if (intersects_any(board_box, obstacles)) return set;

  for (const auto& g : candidates) {
    const Pose tcp = pose * g.tcp_in_object();
    bool hand_blocked = false;
    for (const auto& proxy : chain.tool_proxies) {
      const Obb v = proxy.transformed(tcp);
      if (intersects(v, board_box) || intersects_any(v, obstacles)) {
        hand_blocked = true;
        break;
      }
    }
    if (hand_blocked) continue;

    const IkResult ik = inverse_kinematics_multi(chain, tcp, options.seeds, options.ik);
    if (!ik.ok()) continue;
    if (arm_in_collision(chain, ik.q, board_box, obstacles)) continue;
    set.grasps.push_back({g, ik.q});
  }
  return set;
}

std::vector<GraspCandidate> shared_grasps(const GraspSet& a, const GraspSet& b) {
  if (a.board_id != b.board_id) {
    throw Error(ErrorCode::OwnerMismatch, "grasp sets for boards '" + a.board_id + "' and '" + b.board_id + "'");
  }
  if (!a.empty() && !b.empty() && a.owner != b.owner) {
    throw Error(ErrorCode::OwnerMismatch, "grasp sets owned by different hands");
  }
  std::vector<GraspCandidate> out;
  for (const auto& e : a.grasps) {
    if (b.find(e.grasp) != nullptr) out.push_back(e.grasp);
  }
  return out;
}

bool check_human_grasp_stability(const GraspCandidate& grasp, const BoardSpec& board,
                                 const Pose& pose, const SoftFingerParams& params, double P) {
  if (board.mass <= 0.0) return true;
  const Vec3 force = pose.R.transpose() * Vec3(0.0, 0.0, -board.mass * kGravity);
  const Vec3& n = grasp.opening_dir;
  const Vec3 lever = -grasp.contact_center;  // CoM sits at the object origin
  const Vec3 torque = lever.cross(force);
  const Vec3 tangential = force - force.dot(n) * n;

  // Symmetric pads: both carry half the load, so the worst pad is either one.
  ContactState pad;
  pad.P = P;
  pad.f_t = tangential.norm() / 2.0;
  pad.tau_n = std::abs(torque.dot(n)) / 2.0;
  return soft_finger_satisfied(pad, params).satisfied;
}

GraspGeometry grasp_geometry(const BoardSpec& board, const GraspCandidate& grasp, double ee_length) {
  const Vec3& n = grasp.opening_dir;
  const Vec3 r = -grasp.contact_center;
  const Vec3 in_plane = r - r.dot(n) * n;
  GraspGeometry g;
  g.ee_length = ee_length;
  g.com_offset = in_plane.norm();
  g.mass = board.mass;
  const double plate = board.mass * (board.length * board.length + board.width * board.width) / 12.0;
  g.inertia = plate + board.mass * g.com_offset * g.com_offset;
  if (board.mass <= 0.0) g.inertia = 0.0;
  return g;
}

Vec3 com_direction_in_tcp(const GraspCandidate& grasp) {
  const Pose tcp = grasp.tcp_in_object();
  const Vec3 local = tcp.inverse().apply(Vec3::Zero());
  const Vec3 planar(local.x(), 0.0, local.z());  // drop the component along the pad normal (tcp y)
  if (planar.norm() < 1e-12) return Vec3::Zero();
  return planar.normalized();
}

GraspCandidate canonical_grasp(const CandidateList& candidates, GraspAxis axis) {
  const GraspCandidate* best = nullptr;
  double best_key = std::numeric_limits<double>::infinity();
  for (const auto& g : candidates.grasps) {
    if (g.axis_tag != axis) continue;
    // Approach must point toward the CoM from the outermost grid row.
    const double along = g.contact_center.dot(g.approach);
    const Vec3 lateral = g.contact_center - along * g.approach;
    const double key = along * 1e3 + lateral.norm();  // most negative `along` first, then centered
    if (key < best_key) {
      best_key = key;
      best = &g;
    }
  }
  if (best == nullptr) throw Error(ErrorCode::InvalidArgument, "no candidate with the requested axis");
  return *best;
}

}  // namespace hrc
