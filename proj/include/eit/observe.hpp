#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eit/model.hpp"

namespace eit {

/// Normalised probe transmission for a given Im rho_bc. The coupled atoms
/// carry weight 1 - u, the uncoupled ones a static Lorentzian of weight u.
/// T = 0 for the bare resonant steady state, T = 1 without absorption and
/// T > 1 for gain. Throws Error{Usage} unless omega2 > 0.
double transmission(double im_rho_bc, const LambdaParams& params);

/// Steady-state transmission at each probe detuning (delta1 fixed).
std::vector<std::pair<double, double>> spectrum(const LambdaParams& params,
                                                std::span<const double> delta2_axis);

enum class Engine { ODE, Analytic };
enum class Quantity { ImRhoBC, Transmission };

std::string_view to_string(Engine e);
Engine parse_engine(std::string_view text);
std::string_view to_string(Quantity q);

/// values(i, j) belongs to delta2_axis[i], time_axis[j].
struct ScanGrid {
  std::vector<double> delta2_axis;  // MHz
  std::vector<double> time_axis;    // us
  Eigen::MatrixXd values;
  SwitchMode mode = SwitchMode::TurnOn;
  Quantity quantity = Quantity::ImRhoBC;
};

struct ScanOptions {
  Engine engine = Engine::ODE;
  Quantity quantity = Quantity::ImRhoBC;
  /// Probe-on time before the switch for the ODE engine (us); <= 0 selects
  /// 10 / gamma.
  double warmup = 0.0;
  /// Populations when the probe starts, at switch_time - warmup.
  double rho_aa_start = 0.05;
  double rho_bb_start = 0.95;
  /// Worker threads; 0 picks hardware concurrency.
  unsigned threads = 0;
  double rel_tol = 1e-9;
};

/// Im rho_bc (or T) over the (delta2, t) plane. Rows are independent and may
/// be computed concurrently; results do not depend on the thread count.
/// The analytic engine covers turn-off and steady state at any detuning and
/// turn-on only for delta1 = delta2 = 0; elsewhere it throws
/// Error{EngineUnsupported}. Axes must be strictly ascending (Error{Usage}).
ScanGrid scan(const LambdaParams& params, const FieldSchedule& schedule,
              std::span<const double> delta2_axis, std::span<const double> time_axis,
              const ScanOptions& options = {});

/// Guide curves delta2 = sign n / t + omega1/2 (cyclic units), n = 1..n_max
/// and sign = +-1; NaN where t <= 0.
struct RabiCurve {
  int n;
  int sign;
  std::vector<double> delta2;
};
std::vector<RabiCurve> rabi_peak_curves(double omega1, int n_max, std::span<const double> time_axis);

/// First line `t_us,<times>`, then `<delta2>,<values>` per row.
void write_scan_csv(std::ostream& out, const ScanGrid& grid);

/// Binary P6 image, one pixel per cell, largest delta2 on top. Blue for
/// negative, red for positive, white at zero, scaled by max |value|.
void write_ppm(std::ostream& out, const ScanGrid& grid);

}  // namespace eit
