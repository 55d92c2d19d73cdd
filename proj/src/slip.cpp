#include "hrc/slip.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hrc/error.hpp"
#include "hrc/se3.hpp"

namespace hrc {
namespace {

constexpr double kScanStep = kPi / 180.0;
constexpr double kBisectTol = 1e-4;

// First θ in [0, π/2] where excess(θ) > 0; π/2 if never.
double first_crossing(const std::function<double(double)>& excess, bool refine) {
  if (excess(0.0) > 0.0) return 0.0;
  double prev = 0.0;
  for (int deg = 1; deg <= 90; ++deg) {
    const double theta = std::min(deg * kScanStep, kPi / 2.0);
    if (excess(theta) > 0.0) {
      if (!refine) return theta;
      double lo = prev, hi = theta;
      while (hi - lo > kBisectTol) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? hi : lo) = mid;
      }
      return hi;
    }
    prev = theta;
  }
  return kPi / 2.0;
}

}  // namespace

void GraspGeometry::validate() const {
  if (ee_length < 0.0 || com_offset < 0.0 || mass < 0.0 || inertia < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "grasp geometry values must be non-negative");
  }
  if (mass > 0.0 && !(inertia > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "inertia must be positive for a massive object");
  }
}

double gravity_torque(const GraspGeometry& g, double theta, double phi) {
  const double w = g.mass * kGravity / 2.0;
  const double s = std::sin(theta);
  return w * s * std::sin(phi) * (g.com_offset * std::sin(phi)) +
         w * s * std::cos(phi) * (g.ee_length + g.com_offset * std::cos(phi));
}

double slip_acceleration(const GraspGeometry& g, double tg, double friction_budget) {
  if (!(g.inertia > 0.0)) throw Error(ErrorCode::InvalidArgument, "inertia must be positive");
  return std::max(0.0, (tg - friction_budget) / g.inertia);
}

double slip_angle(double theta, double theta_c, double phi_rest) {
  return theta > theta_c ? phi_rest : 0.0;
}

double critical_inclination(const GraspGeometry& g, double friction_budget) {
  g.validate();
  if (g.mass > 0.0 && friction_budget <= 0.0) return 0.0;
  return first_crossing([&](double t) { return gravity_torque(g, t, 0.0) - friction_budget; }, true);
}

double critical_inclination_scan(const GraspGeometry& g, double friction_budget) {
  g.validate();
  return first_crossing([&](double t) { return gravity_torque(g, t, 0.0) - friction_budget; }, false);
}

SlipAnalysis relaxation_limit(const GraspGeometry& g, const SoftFingerParams& params, double P) {
  g.validate();
  params.validate();
  const double weight_per_finger = g.mass * kGravity / 2.0;
  if (weight_per_finger > params.mu * P) {
    throw Error(ErrorCode::ForceBudgetExceeded, "object weight exceeds the tangential friction budget");
  }
  auto budget = [&](double theta) {
    return 2.0 * max_friction_torque(params, P, weight_per_finger * std::sin(theta));
  };

  SlipAnalysis out;
  for (int deg = 0; deg <= 90; ++deg) {
    const double theta = deg * kScanStep;
    out.torque_curve.emplace_back(theta, gravity_torque(g, theta, 0.0));
    out.budget_curve.push_back(budget(theta));
  }
  if (g.mass <= 0.0) {
    out.theta_c = out.relaxation_limit = kPi / 2.0;
  } else {
    out.theta_c = first_crossing([&](double t) { return gravity_torque(g, t, 0.0) - budget(t); }, true);
    out.relaxation_limit = out.theta_c;
  }
  out.friction_budget = budget(out.theta_c);
  return out;
}

SlipAnalysis SlipCache::get_or_compute(const std::string& key, const GraspGeometry& g,
                                       const SoftFingerParams& params, double grip_force) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  SlipAnalysis a = relaxation_limit(g, params, grip_force);
  std::lock_guard lock(mutex_);
  return entries_.try_emplace(key, std::move(a)).first->second;
}

std::size_t SlipCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace hrc
