#include "eit/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "eit/error.hpp"

namespace eit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::BadFraction: return "BadFraction";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::InvariantBreach: return "InvariantBreach";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegeneratePoles: return "DegeneratePoles";
    case ErrorCode::UnstablePole: return "UnstablePole";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InterpolationMismatch: return "InterpolationMismatch";
    case ErrorCode::EngineUnsupported: return "EngineUnsupported";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::TooFewExtrema: return "TooFewExtrema";
    case ErrorCode::InvalidTrace: return "InvalidTrace";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

LambdaParams validate(const LambdaParams& params) {
  const std::pair<const char*, double> fields[] = {
      {"omega1", params.omega1},     {"omega2", params.omega2},
      {"delta1", params.delta1},     {"delta2", params.delta2},
      {"gamma_ca", params.gamma_ca}, {"gamma_cb", params.gamma_cb},
      {"gamma_ba", params.gamma_ba}, {"uncoupled_fraction", params.uncoupled_fraction},
  };
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) throw Error(ErrorCode::NonFinite, std::string(name) + " is not finite");
  }
  const std::pair<const char*, double> rates[] = {
      {"omega1", params.omega1},     {"omega2", params.omega2},
      {"gamma_ca", params.gamma_ca}, {"gamma_cb", params.gamma_cb},
      {"gamma_ba", params.gamma_ba},
  };
  for (const auto& [name, value] : rates) {
    if (value < 0.0) {
      throw Error(ErrorCode::NegativeRate, std::string(name) + " = " + std::to_string(value));
    }
  }
  if (params.uncoupled_fraction < 0.0 || params.uncoupled_fraction > 1.0) {
    throw Error(ErrorCode::BadFraction,
                "uncoupled_fraction = " + std::to_string(params.uncoupled_fraction));
  }
  return params;
}

std::string_view to_string(Element e) {
  switch (e) {
    case Element::aa: return "aa";
    case Element::bb: return "bb";
    case Element::cc: return "cc";
    case Element::ab: return "ab";
    case Element::ba: return "ba";
    case Element::ac: return "ac";
    case Element::ca: return "ca";
    case Element::bc: return "bc";
    case Element::cb: return "cb";
  }
  return "?";
}

DensityMatrix::DensityMatrix(double aa, double bb, double cc, cplx ab, cplx ac, cplx bc)
    : aa_(aa), bb_(bb), cc_(cc), ab_(ab), ac_(ac), bc_(bc) {
  for (double v : {aa, bb, cc}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidState, "non-finite population");
  }
  for (cplx v : {ab, ac, bc}) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::InvalidState, "non-finite coherence");
    }
  }
  if (std::abs(aa + bb + cc - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidState, "trace = " + std::to_string(aa + bb + cc));
  }
  if (std::min({aa, bb, cc}) < -1e-9) {
    throw Error(ErrorCode::InvalidState, "negative population");
  }
}

DensityMatrix DensityMatrix::pure(const Eigen::Vector3cd& amplitudes) {
  const Eigen::Vector3cd psi = amplitudes / amplitudes.norm();
  return from_matrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::from_matrix(const Eigen::Matrix3cd& m) {
  const double aa = m(0, 0).real();
  const double bb = m(1, 1).real();
  // The trace contract is 1e-12; absorb the last bits of rounding into cc.
  double cc = m(2, 2).real();
  if (std::abs(aa + bb + cc - 1.0) < 1e-13) cc = 1.0 - aa - bb;
  return DensityMatrix(aa, bb, cc, m(0, 1), m(0, 2), m(1, 2));
}

cplx DensityMatrix::operator()(Element e) const {
  switch (e) {
    case Element::aa: return aa_;
    case Element::bb: return bb_;
    case Element::cc: return cc_;
    case Element::ab: return ab_;
    case Element::ba: return ba();
    case Element::ac: return ac_;
    case Element::ca: return ca();
    case Element::bc: return bc_;
    case Element::cb: return cb();
  }
  return {};
}

cplx DensityMatrix::operator()(Level row, Level col) const {
  return matrix()(static_cast<int>(row), static_cast<int>(col));
}

Eigen::Matrix3cd DensityMatrix::matrix() const {
  Eigen::Matrix3cd m;
  m << aa_, ab_, ac_,
       ba(), bb_, bc_,
       ca(), cb(), cc_;
  return m;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::string_view to_string(SwitchMode mode) {
  switch (mode) {
    case SwitchMode::TurnOn: return "TurnOn";
    case SwitchMode::TurnOff: return "TurnOff";
    case SwitchMode::BothOn: return "BothOn";
    case SwitchMode::Steady: return "Steady";
  }
  return "?";
}

SwitchMode parse_switch_mode(std::string_view text) {
  std::string key;
  for (char ch : text) {
    if (ch != '_' && ch != '-') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (key == "turnon") return SwitchMode::TurnOn;
  if (key == "turnoff") return SwitchMode::TurnOff;
  if (key == "bothon") return SwitchMode::BothOn;
  if (key == "steady") return SwitchMode::Steady;
  throw Error(ErrorCode::ParseError, "unknown switch mode '" + std::string(text) + "'");
}

double omega1_at(const FieldSchedule& schedule, double t) {
  const bool after = t >= schedule.switch_time;
  switch (schedule.mode) {
    case SwitchMode::TurnOn:
    case SwitchMode::BothOn:
      return after ? schedule.omega1_on : 0.0;
    case SwitchMode::TurnOff:
      return after ? 0.0 : schedule.omega1_on;
    case SwitchMode::Steady:
      return schedule.omega1_on;
  }
  return 0.0;
}

bool probe_active(const FieldSchedule& schedule, double t) {
  return schedule.mode != SwitchMode::BothOn || t >= schedule.switch_time;
}

DressedPositions dressed_state_positions(double delta1, double omega1) {
  const double half_split = 0.5 * std::hypot(omega1, delta1);
  const double upper = 0.5 * delta1 + half_split;
  const double lower = 0.5 * delta1 - half_split;
  if (std::abs(upper) <= std::abs(lower)) return {upper, lower};
  return {lower, upper};
}

}  // namespace eit
