#include "eit/vector3.hpp"

#include <cmath>

#include "eit/error.hpp"
#include "eit/units.hpp"

namespace eit {

StateVector3::StateVector3(const Eigen::Vector3d& v) : v_(v) {
  if (!(std::abs(v.norm() - 1.0) <= 1e-12)) {
    throw Error(ErrorCode::InvalidState, "state vector is not normalised");
  }
}

DensityMatrix StateVector3::density() const {
  return DensityMatrix::pure(Eigen::Vector3cd(v_.x(), v_.y(), cplx(0.0, -v_.z())));
}

RabiVector RabiVector::from_fields(double omega1, double omega2) {
  return {Eigen::Vector3d(-0.5 * angular(omega2), 0.5 * angular(omega1), 0.0)};
}

StateVector3 precess(const StateVector3& v0, const RabiVector& omega, double t) {
  const double rate = omega.magnitude();
  if (rate == 0.0) return v0;
  const Eigen::Vector3d k = omega.components / rate;
  const Eigen::Vector3d& v = v0.vector();
  const double angle = rate * t;
  const Eigen::Vector3d out = v * std::cos(angle) + k.cross(v) * std::sin(angle) +
                        k * k.dot(v) * (1.0 - std::cos(angle));
  return StateVector3(out);
}

StateVector3 case_b(double theta, double Omega, double t) {
  const double c = std::cos(theta), s = std::sin(theta), ct = std::cos(Omega * t);
  return StateVector3(Eigen::Vector3d(c * s * (ct - 1.0), c * c + s * s * ct,
                                      -s * std::sin(Omega * t)));
}

StateVector3 case_a(double theta, double Omega, double t) {
  const double c = std::cos(theta), s = std::sin(theta), ct = std::cos(Omega * t);
  return StateVector3(Eigen::Vector3d(1.0 + (ct - 1.0) * c * c, c * s * (ct - 1.0),
                                      -c * std::sin(Omega * t)));
}

double im_rbc_of(const StateVector3& v) { return v.b() * v.c(); }

double averaged_fast_oscillation(double omega1, double omega2, double t) {
  const double theta = std::atan2(omega2, omega1);
  const double Omega = RabiVector::from_fields(omega1, omega2).magnitude();
  return 0.5 * (im_rbc_of(case_b(theta, Omega, t)) + im_rbc_of(case_a(theta, Omega, t)));
}

}  // namespace eit
