#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "hrc/contact.hpp"

namespace hrc {

constexpr double kGravity = 9.81;

/// Lever geometry of a pinched object.
struct GraspGeometry {
  double ee_length = 0.0;   ///< wrist reference to fingertip contact [m]
  double com_offset = 0.0;  ///< contact point to object CoM [m]
  double mass = 0.0;        ///< [kg]
  double inertia = 0.0;     ///< about the in-hand rotation axis through the contact [kg·m²]

  void validate() const;
};

struct SlipAnalysis {
  double theta_c = 0.0;           ///< critical inclination [rad]
  double relaxation_limit = 0.0;  ///< ±θ admissible band [rad]
  double friction_budget = 0.0;   ///< 2·T_f at the critical inclination [N·m]
  std::vector<std::pair<double, double>> torque_curve;  ///< (θ, T_g), 1° steps over [0, 90°]
  std::vector<double> budget_curve;                     ///< 2·T_f at the same θ samples
};

/// Gravity torque on the pinched object at end-effector inclination θ and
/// in-hand slip angle φ.
double gravity_torque(const GraspGeometry& g, double theta, double phi);

/// Angular acceleration of the slipping object, clamped at zero because
/// static friction only reacts.
double slip_acceleration(const GraspGeometry& g, double gravity_torque, double friction_budget);

/// Piecewise slip gating: 0 up to and including θ_c, phi_rest beyond.
double slip_angle(double theta, double theta_c, double phi_rest);

/// Smallest θ ∈ [0, π/2] with gravity_torque(g, θ, 0) > friction_budget,
/// or π/2 if none. 1° scan refined by bisection to 1e-4 rad.
double critical_inclination(const GraspGeometry& g, double friction_budget);

/// Raw 1° scan without refinement (grid point where the torque first exceeds
/// the budget).
double critical_inclination_scan(const GraspGeometry& g, double friction_budget);

/// Relaxation limit for a two-finger pinch squeezing with grip_force per
/// finger. The friction budget at θ is 2·max_friction_torque with the
/// per-finger tangential load m·g·sinθ/2.
SlipAnalysis relaxation_limit(const GraspGeometry& g, const SoftFingerParams& params, double grip_force);

/// Thread-safe memo of slip analyses keyed by (object, grasp).
class SlipCache {
 public:
  SlipAnalysis get_or_compute(const std::string& key, const GraspGeometry& g,
                              const SoftFingerParams& params, double grip_force);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, SlipAnalysis> entries_;
};

}  // namespace hrc
