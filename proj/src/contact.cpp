#include "hrc/contact.hpp"

#include <cmath>
#include <string>

#include "hrc/error.hpp"
#include "hrc/se3.hpp"

namespace hrc {

void SoftFingerParams::validate() const {
  if (!(mu > 0.0 && h > 0.0 && K > 0.0 && r1 > 0.0 && r2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "soft-finger parameters must be strictly positive");
  }
  if (mu > 2.0) throw Error(ErrorCode::InvalidArgument, "friction coefficient above 2.0");
}

double eccentricity(const SoftFingerParams& params, double P) {
  params.validate();
  if (!(P > 0.0)) throw Error(ErrorCode::InvalidArgument, "normal force must be positive");
  return (16.0 / 15.0) * std::sqrt(P * params.h * std::sqrt(params.r1 * params.r2) / (params.K * kPi));
}

SoftFingerCheck soft_finger_satisfied(const ContactState& s, const SoftFingerParams& params) {
  const double e = eccentricity(params, s.P);
  const double load = s.f_t * s.f_t + (s.tau_n * s.tau_n) / (e * e);
  const double muP = params.mu * s.P;
  const double cap = muP * muP;
  return {load <= cap, cap - load};
}

double max_friction_torque(const SoftFingerParams& params, double P, double f_t) {
  const double e = eccentricity(params, P);
  const double cap = params.mu * P;
  if (f_t > cap) {
    throw Error(ErrorCode::ForceBudgetExceeded,
                "tangential load " + std::to_string(f_t) + " N exceeds μP = " + std::to_string(cap) + " N");
  }
  return e * std::sqrt(cap * cap - f_t * f_t);
}

}  // namespace hrc
