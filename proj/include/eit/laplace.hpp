#pragma once

#include <map>

#include <Eigen/Dense>

#include "eit/model.hpp"
#include "eit/rational.hpp"

namespace eit {

/// Laplace transforms r_xy(p) keyed by density-matrix element. p is in
/// angular units (1/us), so inverted time arguments are in us.
using ElementMap = std::map<Element, RationalFunction>;

/// Probe-only optical pumping (coupling off, no initial coherences) in closed
/// form: entries bc, cb, aa, bb. Requires gamma_ca == gamma_cb. Throws
/// Error{Unsupported} otherwise, for omega1 != 0 or a non-diagonal rho0.
ElementMap pump_system(const LambdaParams& params, const DensityMatrix& rho0);

/// The quartic D(p) shared by the pump transforms.
ComplexPolynomial pump_denominator(const LambdaParams& params);

/// Small-probe estimate of the slow pumping root, -(omega2/2)^2 gamma /
/// (delta2^2 + gamma^2), angular units.
cplx p4_approx(const LambdaParams& params);

/// The closed 4x4 linear system M(p) r = rhs for r = (r_ac, r_ca, r_bc, r_cb)
/// at one complex p.
struct CoherenceSystem {
  Eigen::Matrix4cd matrix;
  Eigen::Vector4cd rhs;
};
CoherenceSystem coherence_system(const LambdaParams& params, const DensityMatrix& rho0, cplx p);

/// Solves the coherence system for constant fields after t = 0 and returns
/// r_ac, r_ca, r_bc, r_cb over the common denominator p chi(p), chi monic of
/// degree 8. Coefficients come from samples on a circle in the p-plane.
/// Throws Error{SingularSystem} if no sampling radius avoids a singular
/// point and Error{InterpolationMismatch} if the rebuilt transforms fail to
/// satisfy the system at random probe points.
ElementMap turnon_system(const LambdaParams& params, const DensityMatrix& rho0);

/// r_ab, r_ba, r_aa, r_bb, r_cc from the four coherence transforms, over the
/// same denominator.
ElementMap reconstruct_remaining(const ElementMap& coherences, const DensityMatrix& rho0,
                                 const LambdaParams& params);

}  // namespace eit
