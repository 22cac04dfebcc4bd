#pragma once

#include <string_view>

#include "eit/model.hpp"
#include "eit/rational.hpp"

// Closed-form, first-order-in-probe results. Interfaces take cyclic MHz and
// us; everything is evaluated in angular units internally. Unless noted,
// gamma means params.gamma().
namespace eit {

/// Non-fatal diagnostics (currently only the turnon_phi validity guard).
/// The default handler prints to stderr; pass nullptr to silence.
using WarningHandler = void (*)(std::string_view);
void set_warning_handler(WarningHandler handler);

/// Probe-only plateaus reached after the fast optical transient and before
/// slow pumping sets in.
struct PumpPlateau {
  cplx rho_bc;
  double rho_aa;
  double rho_bb;
};
/// Requires omega1 = 0 and a diagonal rho0 (Error{Unsupported}).
PumpPlateau pump_intermediate(const DensityMatrix& rho0, const LambdaParams& params);

/// Coherence-driven damped nutation after a resonant turn-on, including
/// ground-state dephasing. Below omega1 = |gamma - gamma_ba| the oscillation
/// continues analytically into hyperbolic functions.
double turnon_nutation(cplx rho_bc0, const LambdaParams& params, double t);

/// Laplace transform of Im rho_bc(t) after a resonant turn-on to first order
/// in the probe (delta1 = delta2 = 0, gamma_ba = 0, equal decay). Throws
/// Error{Unsupported} otherwise.
RationalFunction turnon_im_transform(const DensityMatrix& rho0, const LambdaParams& params);

struct PhiDecomposition {
  double phi12 = 0.0;
  double phi3 = 0.0;
  double phi45 = 0.0;

  double total() const { return phi12 + phi3 + phi45; }
};

/// Strong-coupling approximation of Im rho_bc(t) after a resonant turn-on
/// split by pole pair. With `dephasing` the gamma_ba-dependent forms are
/// used, otherwise gamma_ba is ignored. Warns once per call when
/// omega1 / gamma < 2.
PhiDecomposition turnon_phi(const DensityMatrix& rho0, const LambdaParams& params, double t,
                            bool dephasing);

/// Pre-switch steady state with both fields on, to first order in the probe.
struct TurnoffInitial {
  cplx rho_bc;
  double rho_aa = 0.0;
  double rho_bb = 1.0;
};
TurnoffInitial turnoff_initial_coherence(const LambdaParams& params);

/// rho_bc(t) after the coupling is removed at t = 0 (t >= 0).
cplx turnoff_rbc(const LambdaParams& params, double t);

/// Im rho_bc(t) after the coupling is removed at t = 0 (t >= 0). Throws
/// Error{Usage} for t < 0.
double turnoff_im_rbc(const LambdaParams& params, double t);

/// Steady-state Im rho_bc with both fields on, any detunings.
double steady_eit_lineshape(const LambdaParams& params);

}  // namespace eit
