#include "eit/analytic.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "eit/error.hpp"
#include "eit/units.hpp"

namespace eit {
namespace {

constexpr cplx I{0.0, 1.0};

void default_warning(std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }

WarningHandler g_warning = &default_warning;

void warn(std::string_view msg) {
  if (g_warning) g_warning(msg);
}

struct Angular {
  double O1, O2, B, d1, d2, d21, g, gba;
};

Angular angular_of(const LambdaParams& p) {
  return {angular(p.omega1),   angular(p.omega2), 0.5 * angular(p.omega2),
          angular(p.delta1),   angular(p.delta2), angular(p.delta21()),
          angular(p.gamma()),  angular(p.gamma_ba)};
}

}  // namespace

void set_warning_handler(WarningHandler handler) { g_warning = handler; }

PumpPlateau pump_intermediate(const DensityMatrix& rho0, const LambdaParams& params) {
  if (params.omega1 != 0.0) throw Error(ErrorCode::Unsupported, "pump plateaus need omega1 = 0");
  if (!rho0.is_diagonal()) throw Error(ErrorCode::Unsupported, "pump plateaus need a diagonal rho0");
  const double aa = rho0.aa(), bb = rho0.bb();
  const cplx bc = -(params.omega2 / 4.0) * (1.0 - aa + bb) / cplx(params.delta2, -params.gamma());
  return {bc, 0.5 * (1.0 + aa - bb), 0.5 * (1.0 - aa + bb)};
}

double turnon_nutation(cplx rho_bc0, const LambdaParams& params, double t) {
  const Angular w = angular_of(params);
  const double damp = w.g - w.gba;
  const double f2 = w.O1 * w.O1 - damp * damp;
  double c, s_over_f;  // cos(f't/2) and sin(f't/2)/f'
  if (std::abs(f2) < 1e-12 * (w.O1 * w.O1 + damp * damp + 1.0)) {
    c = 1.0;
    s_over_f = 0.5 * t;
  } else if (f2 > 0.0) {
    const double f = std::sqrt(f2);
    c = std::cos(0.5 * f * t);
    s_over_f = std::sin(0.5 * f * t) / f;
  } else {
    const double h = std::sqrt(-f2);
    c = std::cosh(0.5 * h * t);
    s_over_f = std::sinh(0.5 * h * t) / h;
  }
  return rho_bc0.imag() * std::exp(-0.5 * (w.g + w.gba) * t) * (c - damp * s_over_f);
}

RationalFunction turnon_im_transform(const DensityMatrix& rho0, const LambdaParams& params) {
  if (params.delta1 != 0.0 || params.delta2 != 0.0 || params.gamma_ba != 0.0 ||
      params.gamma_ca != params.gamma_cb) {
    throw Error(ErrorCode::Unsupported,
                "turn-on transform needs resonant fields, gamma_ba = 0 and equal decay");
  }
  const Angular w = angular_of(params);
  const double A2 = 0.25 * w.O1 * w.O1, g = w.g;
  const double aa = rho0.aa(), bb = rho0.bb();
  const ComplexPolynomial nutation{A2, g, 1.0};
  const RationalFunction coherence{ComplexPolynomial{0.0, rho0.bc().imag()}, nutation};
  const RationalFunction populations{ComplexPolynomial::constant((aa - bb) * w.B), nutation};
  const ComplexPolynomial p{0.0, 1.0};
  const ComplexPolynomial cubic = p * ComplexPolynomial{g, 1.0} * ComplexPolynomial{2.0 * g, 1.0} +
                                  ComplexPolynomial{2.0 * g * A2, 4.0 * A2};
  const RationalFunction pumping{
      cplx(-w.B) * ComplexPolynomial{g * aa - (bb - 1.0) * g, (bb - 1.0) + 2.0 * aa}, cubic};
  return coherence + populations + pumping;
}

PhiDecomposition turnon_phi(const DensityMatrix& rho0, const LambdaParams& params, double t,
                            bool dephasing) {
  if (params.omega1 < 2.0 * params.gamma()) {
    warn("turnon_phi: omega1/gamma = " + std::to_string(params.omega1 / params.gamma()) +
         " is below 2; the strong-coupling approximation is unreliable");
  }
  const Angular w = angular_of(params);
  const double O1 = w.O1, O2 = w.O2, g = w.g;
  const double aa = rho0.aa(), bb = rho0.bb(), imb = rho0.bc().imag();
  const double c1 = std::cos(0.5 * O1 * t), s1 = std::sin(0.5 * O1 * t);
  const double c2 = std::cos(O1 * t), s2 = std::sin(O1 * t);
  const double e3 = std::exp(-0.5 * g * t), e45 = std::exp(-1.25 * g * t);
  PhiDecomposition out;
  if (!dephasing) {
    const double x = O1 / g;
    const double weight = 12.0 * (1.0 - bb) / (9.0 + 16.0 * x * x);
    out.phi12 = e3 * (imb * c1 + (g / O1) * ((aa - bb) * O2 / g - imb) * s1);
    out.phi3 = -(O2 / g) * weight * e3;
    out.phi45 = (O2 / g) * e45 * (weight * c2 + 0.5 * (1.0 - bb - 2.0 * aa) * (g / O1) * s2);
    return out;
  }
  const double gba = w.gba;
  const double e12 = std::exp(-0.5 * (g + gba) * t);
  out.phi12 = e12 * (imb + O2 * gba / 3.0 * (5.0 * bb + aa - 2.0) / (O1 * O1)) * c1 -
              (O2 / O1) * e12 * (imb * (g - gba) / O2 + (bb - aa)) * s1;
  out.phi3 = -2.0 * O2 / (O1 * O1) * (gba + 0.375 * (1.0 - bb) * (g - 4.0 * gba) * e3);
  out.phi45 = (O2 / O1) * e45 *
              ((0.75 * g * (1.0 - bb) / O1 + gba / 3.0 * (1.0 - 2.0 * aa - bb) / O1) * c2 +
               0.5 * (1.0 - 2.0 * aa - bb) * s2);
  return out;
}

TurnoffInitial turnoff_initial_coherence(const LambdaParams& params) {
  const Angular w = angular_of(params);
  const cplx den(0.25 * w.O1 * w.O1 - w.d2 * w.d21 + w.gba * w.g, w.d21 * w.g + w.d2 * w.gba);
  return {w.B * cplx(w.d21, -w.gba) / den, 0.0, 1.0};
}

cplx turnoff_rbc(const LambdaParams& params, double t) {
  if (t < 0.0) throw Error(ErrorCode::Usage, "turn-off transient needs t >= 0");
  const Angular w = angular_of(params);
  const cplx z(w.g, w.d2);
  const cplx decay = std::exp(-z * t);
  return turnoff_initial_coherence(params).rho_bc * decay - I * w.B * (1.0 - decay) / z;
}

double turnoff_im_rbc(const LambdaParams& params, double t) {
  if (t < 0.0) throw Error(ErrorCode::Usage, "turn-off transient needs t >= 0");
  const Angular w = angular_of(params);
  const double g = w.g, d2 = w.d2, d21 = w.d21, gba = w.gba, A2 = 0.25 * w.O1 * w.O1;
  const double e = std::exp(-g * t), c = std::cos(d2 * t), s = std::sin(d2 * t);
  const double x = g * gba - d2 * d21 + A2, y = d21 * g + d2 * gba;
  const double den = x * x + y * y;
  const double bare = -w.B * (g + e * (d2 * s - g * c)) / (g * g + d2 * d2);
  const double cos_term = -w.B * e * (g * d21 * d21 + gba * (g * gba + A2)) * c / den;
  const double sin_term = -w.B * e * (d21 * A2 - d2 * d21 * d21 - d2 * gba * gba) * s / den;
  return bare + cos_term + sin_term;
}

double steady_eit_lineshape(const LambdaParams& params) {
  const Angular w = angular_of(params);
  const double g = w.g, d2 = w.d2, d21 = w.d21, gba = w.gba, A2 = 0.25 * w.O1 * w.O1;
  const double x = g * gba - d2 * d21 + A2, y = d21 * g + d2 * gba;
  return -w.B * (g * d21 * d21 + gba * (g * gba + A2)) / (x * x + y * y);
}

}  // namespace eit
