#pragma once

#include <iosfwd>
#include <map>
#include <string_view>
#include <vector>

#include "eit/model.hpp"

namespace eit {

/// (t, T) samples. Throws Error{InvalidTrace} for fewer than 8 points,
/// mismatched lengths or non-ascending times.
struct Trace {
  std::vector<double> times;  // us
  std::vector<double> values;

  Trace() = default;
  Trace(std::vector<double> t, std::vector<double> v);
  std::size_t size() const { return times.size(); }
};

/// Detector nuisance: observed = baseline + scale * model(t - t0).
struct Nuisance {
  double scale = 1.0;
  double t0 = 0.0;  // us
  double baseline = 0.0;
};

/// What the trace holds: transmission T or Im rho_bc directly.
enum class FitQuantity { Transmission, ImRhoBC };

/// Turn-off model: before t0 the pre-switch steady level, afterwards the
/// first-order transient; mapped to T unless quantity is ImRhoBC.
double model_turnoff(const LambdaParams& params, const Nuisance& nuisance, double t,
                     FitQuantity quantity = FitQuantity::Transmission);

inline double model_turnoff_T(const LambdaParams& params, const Nuisance& nuisance, double t) {
  return model_turnoff(params, nuisance, t, FitQuantity::Transmission);
}

enum class FitParam { delta2, delta1, omega1, omega2, gamma, gamma_ba, u, scale, t0, baseline };

std::string_view to_string(FitParam p);
FitParam parse_fit_param(std::string_view name);

/// Delta2, scale, baseline and t0.
std::vector<FitParam> default_free_set();

struct FitResult {
  LambdaParams params;
  Nuisance nuisance;
  std::map<FitParam, double> stderrs;
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FitOptions {
  FitQuantity quantity = FitQuantity::Transmission;
  int max_iterations = 500;
};

/// Levenberg-Marquardt on the squared residuals. Setting gamma sets
/// gamma_ca = gamma_cb. Stops when the relative decrease is below 1e-10 or
/// the step is below 1e-12 for 3 successive iterations. Standard errors come
/// from (J^T J)^-1 rss / (n - k). Throws Error{SingularJacobian} (naming the
/// collinear parameters) when the scaled Jacobian's condition number exceeds
/// 1e8 and Error{NoConvergence} at the iteration cap.
FitResult fit_turnoff(const Trace& trace, const LambdaParams& initial,
                      const Nuisance& initial_nuisance, const std::vector<FitParam>& free,
                      const FitOptions& options = {});

/// Local extrema after parabolic refinement, as (t, value).
std::vector<std::pair<double, double>> trace_extrema(const Trace& trace);

/// Decay rate (cyclic MHz) of the ringing envelope: |extremum - asymptote|
/// fitted to A exp(-2 pi gamma t). The asymptote comes from Aitken
/// extrapolation of consecutive extrema. Throws Error{TooFewExtrema} below 3.
double envelope_decay(const Trace& trace);

/// Twice the median spacing of consecutive extrema (us). Throws
/// Error{TooFewExtrema} below 2.
double ringing_period(const Trace& trace);

/// Text report: `name = value +/- stderr` per free parameter, `rss = ...`,
/// `converged = true|false`.
void write_report(std::ostream& out, const FitResult& result);

}  // namespace eit
