#pragma once

#include <span>
#include <string>
#include <vector>

#include "hrc/contact.hpp"
#include "hrc/geometry.hpp"
#include "hrc/kinematics.hpp"
#include "hrc/slip.hpp"

namespace hrc {

enum class Owner { RobotLeft, RobotRight, HumanLeft, HumanRight };
enum class GraspAxis { Longitudinal, Transverse };

const char* to_string(Owner owner);
const char* to_string(GraspAxis axis);
Owner owner_from_string(const std::string& s);
GraspAxis axis_from_string(const std::string& s);

/// Rectangular board; local frame at the CoM with x along the length, y
/// along the width and z across the thickness.
struct BoardSpec {
  std::string id;
  double length = 0.0;
  double width = 0.0;
  double thickness = 0.0;
  double mass = 0.0;

  Vec3 half_extents() const { return {length / 2, width / 2, thickness / 2}; }
  Obb box_at(const Pose& pose) const { return {pose, half_extents()}; }
  TriangleMesh mesh() const { return box_mesh(half_extents()); }
  /// length ≥ width ≥ thickness > 0, mass ≥ 0, watertight mesh.
  void validate() const;
};

/// Parallel pinch in the object frame. The TCP frame of the grasp has z
/// along `approach` and y along `opening_dir`.
struct GraspCandidate {
  Owner owner = Owner::RobotLeft;
  Vec3 contact_center = Vec3::Zero();
  Vec3 approach = Vec3::UnitX();
  Vec3 opening_dir = Vec3::UnitZ();
  double width = 0.0;
  GraspAxis axis_tag = GraspAxis::Longitudinal;
  int index = 0;  ///< position in the generated candidate list

  Pose tcp_in_object() const;
  /// Same object-frame grasp (owner and geometry), ignoring the index.
  bool same_grasp(const GraspCandidate& other) const;
};

struct CandidateList {
  std::vector<GraspCandidate> grasps;
  bool too_thick = false;  ///< board thicker than the hand opens
};

/// Antipodal pinches across the thickness on a centered grid of pitch
/// `spacing`, four in-plane approach directions per grid point.
CandidateList generate_candidates(const BoardSpec& board, Owner owner, double max_opening,
                                  double spacing);

struct GraspEntry {
  GraspCandidate grasp;
  JointConfig q;
};

struct GraspSet {
  std::string board_id;
  Owner owner = Owner::RobotLeft;
  Pose object_pose;
  std::vector<GraspEntry> grasps;

  bool empty() const { return grasps.empty(); }
  const GraspEntry* find(const GraspCandidate& g) const;
};

struct FeasibilityOptions {
  std::vector<JointConfig> seeds;  ///< tried before the chain's own seeds
  IkOptions ik;
};

/// Candidates with a converged IK solution whose arm and hand volumes are
/// clear of `obstacles` and of the board itself. Empty when the board
/// intersects `obstacles`.
GraspSet feasible_grasps(const BoardSpec& board, const Pose& pose,
                         std::span<const GraspCandidate> candidates, const SerialChain& chain,
                         std::span<const Obb> obstacles, const FeasibilityOptions& options = {});

/// Collision test of a chain at q against obstacles and the held board.
bool arm_in_collision(const SerialChain& chain, const JointConfig& q, const Obb& board_box,
                      std::span<const Obb> obstacles);

/// Candidates feasible in both sets (object-frame identity), in set_a order.
/// Throws OwnerMismatch for different boards or owners.
std::vector<GraspCandidate> shared_grasps(const GraspSet& set_a, const GraspSet& set_b);

/// Soft-finger stability of a human pinch holding the board statically at
/// `pose`: the gravity wrench about the contact is split over two pads.
bool check_human_grasp_stability(const GraspCandidate& grasp, const BoardSpec& board,
                                 const Pose& pose, const SoftFingerParams& params, double P);

/// Lever geometry used by the slip model. Inertia is the thin-plate moment
/// about the pad normal, shifted to the contact.
GraspGeometry grasp_geometry(const BoardSpec& board, const GraspCandidate& grasp, double ee_length);

/// Unit direction from the contact to the CoM in the grasp TCP frame; zero
/// when the contact sits on the CoM.
Vec3 com_direction_in_tcp(const GraspCandidate& grasp);

/// Edge grasp along `axis` whose approach points into the board and whose
/// contact lies closest to the board's center line.
GraspCandidate canonical_grasp(const CandidateList& candidates, GraspAxis axis);

}  // namespace hrc
