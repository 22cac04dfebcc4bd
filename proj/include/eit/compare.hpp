#pragma once

#include <random>
#include <span>

#include "eit/model.hpp"

namespace eit {

/// Weak-probe parameter set: gamma in [4, 7], omega1/gamma in [2, 10],
/// omega2/gamma in [0.01, 0.05], |delta1|, |delta2| <= 2 omega1,
/// gamma_ba in [0, 0.6 gamma], equal branching, u = 0.2.
LambdaParams random_weak_probe_params(std::mt19937_64& rng);

/// 10 (omega2/gamma)^2 (omega2 / 2 gamma): second-order slack on the
/// first-order turn-off formula.
double turnoff_tolerance(const LambdaParams& params);

struct TurnoffComparison {
  double analytic_vs_ode = 0.0;
  double laplace_vs_ode = 0.0;
};

/// Turn-off at t = 0 after a coupled warmup from |b>. Max |Im rho_bc|
/// differences over times (all >= 0) between the closed form, the ODE and
/// Laplace inversion started from the ODE state at the switch.
TurnoffComparison compare_turnoff(const LambdaParams& params, std::span<const double> times);

/// Both fields on from t = 0. Max |Im rho_bc| difference between Laplace
/// inversion and the ODE over times.
double compare_turnon(const LambdaParams& params, const DensityMatrix& rho0,
                      std::span<const double> times);

}  // namespace eit
