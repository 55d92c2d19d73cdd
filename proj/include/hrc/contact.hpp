#pragma once

namespace hrc {

/// Soft-finger pad parameters (SI units). r1 and r2 are the relative radii
/// of the pad and of the contacted surface.
struct SoftFingerParams {
  double mu = 0.8;
  double h = 2e-3;
  double K = 5e5;
  double r1 = 0.015;
  double r2 = 0.05;

  void validate() const;  ///< throws InvalidArgument
};

struct ContactState {
  double f_t = 0.0;    ///< tangential friction force [N]
  double tau_n = 0.0;  ///< friction moment about the contact normal [N·m]
  double P = 1.0;      ///< normal pressure force [N]
};

struct SoftFingerCheck {
  bool satisfied = false;
  double margin = 0.0;  ///< μ²P² − (f_t² + τ_n²/e_n²) [N²]
};

/// Winkler-foundation eccentricity e_n = (16/15)·√(P·h·√(r1·r2) / (K·π)).
double eccentricity(const SoftFingerParams& params, double P);

/// Limit-ellipse test f_t² + τ_n²/e_n² ≤ μ²P².
SoftFingerCheck soft_finger_satisfied(const ContactState& state, const SoftFingerParams& params);

/// Largest τ_n the pad sustains while carrying f_t: e_n·√(μ²P² − f_t²).
/// Throws ForceBudgetExceeded when f_t > μP.
double max_friction_torque(const SoftFingerParams& params, double P, double f_t);

}  // namespace hrc
