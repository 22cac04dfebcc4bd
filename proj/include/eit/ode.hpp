#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eit/model.hpp"

namespace eit {

/// Time-sampled density-matrix evolution.
struct Trajectory {
  std::vector<double> times;  // us, ascending
  std::vector<DensityMatrix> states;

  std::size_t size() const { return times.size(); }
  std::vector<double> im_rho_bc() const;
};

/// Instantaneous field amplitudes (cyclic MHz).
struct Fields {
  double omega1 = 0.0;
  double omega2 = 0.0;
};

/// Rotating-frame Bloch equations of the Lambda system for an arbitrary 3x3
/// matrix (linear, homogeneous). Returns d(rho)/dt in 1/us. Rates are taken
/// from params and converted to angular units; gamma_ca and gamma_cb are kept
/// distinct.
Eigen::Matrix3cd bloch_rhs(const Eigen::Matrix3cd& rho, const LambdaParams& params,
                           const Fields& fields);

/// bloch_rhs with the probe at params.omega2.
Eigen::Matrix3cd rhs(const DensityMatrix& rho, const LambdaParams& params, double omega1_now);

inline constexpr double kDefaultRelTol = 1e-9;

/// Adaptive Dormand-Prince 5(4) integration with dense output sampled at
/// t_grid. rho0 is the state at t_grid.front(). Integration restarts at the
/// schedule's switch time, so no step ever straddles the field discontinuity.
/// Throws Error{StepFailure} when the step size collapses and
/// Error{InvariantBreach} if trace or positivity drifts.
Trajectory evolve(const DensityMatrix& rho0, const FieldSchedule& schedule,
                  const LambdaParams& params, std::span<const double> t_grid,
                  double rel_tol = kDefaultRelTol);

/// Default starting populations for the preparation run (rho_aa, rho_bb).
struct Populations {
  double aa = 0.05;
  double bb = 0.95;
};

/// Runs the pre-switch fields for `warmup` us, starting from a diagonal state
/// with the given populations, and returns the state at the switch instant.
/// warmup must be at least 10/gamma (gamma in MHz, warmup in us).
DensityMatrix prepare_steady(const LambdaParams& params, const FieldSchedule& schedule,
                             double warmup, Populations initial = {},
                             double rel_tol = kDefaultRelTol);

}  // namespace eit
