#pragma once

#include <complex>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

namespace eit {

using cplx = std::complex<double>;

/// Parameters of the three-level Lambda atom. All frequencies are cyclic MHz.
///
/// |a> -- coupling (omega1, delta1) -- |c> -- probe (omega2, delta2) -- |b>.
/// |c> decays to |a> and |b> at gamma_ca and gamma_cb; the ground-state
/// coherence dephases at gamma_ba. uncoupled_fraction is the share of the
/// resonant absorption that comes from atoms blind to the coupling field.
struct LambdaParams {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double gamma_ca = 0.0;
  double gamma_cb = 0.0;
  double gamma_ba = 0.0;
  double uncoupled_fraction = 0.2;

  double delta21() const { return delta2 - delta1; }

  /// Optical coherence decay rate (gamma_ca + gamma_cb) / 2. Equals gamma
  /// for equal branching.
  double gamma() const { return 0.5 * (gamma_ca + gamma_cb); }

  /// Equal branching gamma_ca = gamma_cb = gamma.
  static LambdaParams with_equal_decay(double omega1, double omega2, double delta1,
                                       double delta2, double gamma, double gamma_ba,
                                       double uncoupled_fraction = 0.2) {
    return {omega1, omega2, delta1, delta2, gamma, gamma, gamma_ba, uncoupled_fraction};
  }

  friend bool operator==(const LambdaParams&, const LambdaParams&) = default;
};

/// Throws Error{NegativeRate | BadFraction | NonFinite}. Idempotent.
LambdaParams validate(const LambdaParams& params);

/// Level labels; `Element` names a density-matrix entry rho_{row col}.
enum class Level { a = 0, b = 1, c = 2 };

enum class Element { aa, bb, cc, ab, ba, ac, ca, bc, cb };

std::string_view to_string(Element e);

/// 3x3 Hermitian, unit-trace state. Only the diagonal (real) and the three
/// upper entries ab, ac, bc are stored, so Hermiticity holds by construction.
class DensityMatrix {
 public:
  /// Defaults to |b><b|.
  DensityMatrix() : DensityMatrix(0.0, 1.0, 0.0) {}

  /// Throws Error{InvalidState} when the trace is off by more than 1e-12 or
  /// a population is below -1e-9.
  DensityMatrix(double aa, double bb, double cc, cplx ab = {}, cplx ac = {}, cplx bc = {});

  /// Builds rho = |psi><psi| for normalized amplitudes (c_a, c_b, c_c).
  static DensityMatrix pure(const Eigen::Vector3cd& amplitudes);

  /// Reads the diagonal and upper triangle of a Hermitian matrix.
  static DensityMatrix from_matrix(const Eigen::Matrix3cd& m);

  double aa() const { return aa_; }
  double bb() const { return bb_; }
  double cc() const { return cc_; }
  cplx ab() const { return ab_; }
  cplx ac() const { return ac_; }
  cplx bc() const { return bc_; }
  cplx ba() const { return std::conj(ab_); }
  cplx ca() const { return std::conj(ac_); }
  cplx cb() const { return std::conj(bc_); }

  cplx operator()(Element e) const;
  cplx operator()(Level row, Level col) const;

  double trace() const { return aa_ + bb_ + cc_; }
  bool is_diagonal() const { return ab_ == cplx{} && ac_ == cplx{} && bc_ == cplx{}; }

  Eigen::Matrix3cd matrix() const;

  /// Smallest eigenvalue; positivity is checked against this, never enforced.
  double min_eigenvalue() const;

 private:
  double aa_, bb_, cc_;
  cplx ab_, ac_, bc_;
};

enum class SwitchMode { TurnOn, TurnOff, BothOn, Steady };

std::string_view to_string(SwitchMode mode);
/// Accepts the enumerator names plus snake_case spellings (turn_on, ...).
SwitchMode parse_switch_mode(std::string_view text);

/// Idealized instantaneous switching of the coupling field at switch_time.
/// Omega1(t) is right-continuous: the switch instant belongs to the new value.
struct FieldSchedule {
  SwitchMode mode = SwitchMode::Steady;
  double switch_time = 0.0;  // us
  double omega1_on = 0.0;    // MHz

  friend bool operator==(const FieldSchedule&, const FieldSchedule&) = default;
};

double omega1_at(const FieldSchedule& schedule, double t);

/// False only for BothOn before the switch (probe switched with the coupling).
bool probe_active(const FieldSchedule& schedule, double t);

struct DressedPositions {
  double major;  // branch nearer the bare resonance delta2 = 0
  double minor;
};

/// Probe detunings delta1/2 +- sqrt(omega1^2 + delta1^2)/2 of the two
/// Autler-Townes components. On a tie (delta1 = 0) the positive one is major.
DressedPositions dressed_state_positions(double delta1, double omega1);

}  // namespace eit
