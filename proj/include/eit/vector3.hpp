#pragma once

#include <Eigen/Dense>

#include "eit/model.hpp"

// Decay-free three-level dynamics with resonant fields as rotations of a real
// unit vector v = (v_a, v_b, v_c), |psi> = v_a|a> + v_b|b> - i v_c|c>.
namespace eit {

class StateVector3 {
 public:
  /// Throws Error{InvalidState} unless |v| = 1 within 1e-12.
  explicit StateVector3(const Eigen::Vector3d& v);
  StateVector3(double va, double vb, double vc) : StateVector3(Eigen::Vector3d(va, vb, vc)) {}

  const Eigen::Vector3d& vector() const { return v_; }
  double a() const { return v_.x(); }
  double b() const { return v_.y(); }
  double c() const { return v_.z(); }

  DensityMatrix density() const;

 private:
  Eigen::Vector3d v_;
};

/// (-omega2/2, omega1/2, 0) in rad/us for cyclic MHz inputs.
struct RabiVector {
  Eigen::Vector3d components;

  static RabiVector from_fields(double omega1, double omega2);
  double magnitude() const { return components.norm(); }
};

/// Exact rotation of v0 about the Rabi vector by angle |Omega| t (Rodrigues).
StateVector3 precess(const StateVector3& v0, const RabiVector& omega, double t);

/// Start on the b axis; theta = atan(omega2/omega1), Omega in rad/us.
StateVector3 case_b(double theta, double Omega, double t);
/// Start on the a axis.
StateVector3 case_a(double theta, double Omega, double t);

/// Im rho_bc = v_b v_c.
double im_rbc_of(const StateVector3& v);

/// Mean of Im rho_bc over the a- and b-started ensembles (equal ground
/// populations, no ground coherence). Cyclic MHz in, t in us.
double averaged_fast_oscillation(double omega1, double omega2, double t);

}  // namespace eit
