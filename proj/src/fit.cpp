#include "eit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "eit/analytic.hpp"
#include "eit/error.hpp"
#include "eit/observe.hpp"
#include "eit/units.hpp"

namespace eit {
namespace {

constexpr FitParam kAllParams[] = {FitParam::delta2, FitParam::delta1,   FitParam::omega1,
                                   FitParam::omega2, FitParam::gamma,    FitParam::gamma_ba,
                                   FitParam::u,      FitParam::scale,    FitParam::t0,
                                   FitParam::baseline};

struct Point {
  LambdaParams params;
  Nuisance nuisance;
};

double get(const Point& x, FitParam p) {
  switch (p) {
    case FitParam::delta2: return x.params.delta2;
    case FitParam::delta1: return x.params.delta1;
    case FitParam::omega1: return x.params.omega1;
    case FitParam::omega2: return x.params.omega2;
    case FitParam::gamma: return x.params.gamma();
    case FitParam::gamma_ba: return x.params.gamma_ba;
    case FitParam::u: return x.params.uncoupled_fraction;
    case FitParam::scale: return x.nuisance.scale;
    case FitParam::t0: return x.nuisance.t0;
    case FitParam::baseline: return x.nuisance.baseline;
  }
  return 0.0;
}

void set(Point& x, FitParam p, double v) {
  switch (p) {
    case FitParam::delta2: x.params.delta2 = v; break;
    case FitParam::delta1: x.params.delta1 = v; break;
    case FitParam::omega1: x.params.omega1 = v; break;
    case FitParam::omega2: x.params.omega2 = v; break;
    case FitParam::gamma: x.params.gamma_ca = x.params.gamma_cb = v; break;
    case FitParam::gamma_ba: x.params.gamma_ba = v; break;
    case FitParam::u: x.params.uncoupled_fraction = v; break;
    case FitParam::scale: x.nuisance.scale = v; break;
    case FitParam::t0: x.nuisance.t0 = v; break;
    case FitParam::baseline: x.nuisance.baseline = v; break;
  }
}

// Typical magnitude used to size finite-difference steps.
double typical(FitParam p) { return p == FitParam::t0 ? 1e-3 : 1.0; }

class Problem {
 public:
  Problem(const Trace& trace, Point base, std::vector<FitParam> free, FitQuantity quantity)
      : trace_(trace), base_(std::move(base)), free_(std::move(free)), quantity_(quantity) {}

  Eigen::Index size() const { return static_cast<Eigen::Index>(free_.size()); }

  Eigen::VectorXd pack(const Point& x) const {
    Eigen::VectorXd v(size());
    for (Eigen::Index j = 0; j < size(); ++j) v(j) = get(x, free_[j]);
    return v;
  }

  Point unpack(const Eigen::VectorXd& v) const {
    Point x = base_;
    for (Eigen::Index j = 0; j < size(); ++j) set(x, free_[j], v(j));
    return x;
  }

  // Non-finite or failing model evaluations yield an infinite residual so
  // the step is rejected.
  Eigen::VectorXd residuals(const Eigen::VectorXd& v) const {
    const Point x = unpack(v);
    Eigen::VectorXd r(static_cast<Eigen::Index>(trace_.size()));
    try {
      validate(x.params);
      for (std::size_t i = 0; i < trace_.size(); ++i) {
        r(i) = model_turnoff(x.params, x.nuisance, trace_.times[i], quantity_) - trace_.values[i];
      }
    } catch (const Error&) {
      r.setConstant(std::numeric_limits<double>::infinity());
    }
    if (!r.allFinite()) r.setConstant(std::numeric_limits<double>::infinity());
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd J(static_cast<Eigen::Index>(trace_.size()), size());
    for (Eigen::Index j = 0; j < size(); ++j) {
      const double h = 1e-6 * (std::abs(v(j)) + typical(free_[j]));
      Eigen::VectorXd up = v, down = v;
      up(j) += h;
      down(j) -= h;
      J.col(j) = (residuals(up) - residuals(down)) / (2.0 * h);
    }
    return J;
  }

  const std::vector<FitParam>& free() const { return free_; }

 private:
  const Trace& trace_;
  Point base_;
  std::vector<FitParam> free_;
  FitQuantity quantity_;
};

void check_identifiable(const Eigen::MatrixXd& J, const std::vector<FitParam>& free) {
  Eigen::MatrixXd scaled = J;
  for (Eigen::Index j = 0; j < J.cols(); ++j) {
    const double n = J.col(j).norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw Error(ErrorCode::SingularJacobian,
                  "the model does not depend on " + std::string(to_string(free[j])));
    }
    scaled.col(j) /= n;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cond = s(0) / s(s.size() - 1);
  if (!(cond <= 1e8)) {
    const Eigen::VectorXd null = svd.matrixV().col(s.size() - 1);
    std::string names;
    for (Eigen::Index j = 0; j < null.size(); ++j) {
      if (std::abs(null(j)) > 0.1) names += (names.empty() ? "" : ", ") + std::string(to_string(free[j]));
    }
    throw Error(ErrorCode::SingularJacobian,
                "condition number " + std::to_string(cond) + "; collinear: " + names);
  }
}

}  // namespace

Trace::Trace(std::vector<double> t, std::vector<double> v) : times(std::move(t)), values(std::move(v)) {
  if (times.size() != values.size()) throw Error(ErrorCode::InvalidTrace, "length mismatch");
  if (times.size() < 8) throw Error(ErrorCode::InvalidTrace, "a trace needs at least 8 samples");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error(ErrorCode::InvalidTrace, "times must be strictly ascending");
  }
}

double model_turnoff(const LambdaParams& params, const Nuisance& nuisance, double t,
                     FitQuantity quantity) {
  const double x = t - nuisance.t0;
  const double im = x < 0.0 ? steady_eit_lineshape(params) : turnoff_im_rbc(params, x);
  const double y = quantity == FitQuantity::Transmission ? transmission(im, params) : im;
  return nuisance.baseline + nuisance.scale * y;
}

std::string_view to_string(FitParam p) {
  switch (p) {
    case FitParam::delta2: return "delta2";
    case FitParam::delta1: return "delta1";
    case FitParam::omega1: return "omega1";
    case FitParam::omega2: return "omega2";
    case FitParam::gamma: return "gamma";
    case FitParam::gamma_ba: return "gamma_ba";
    case FitParam::u: return "uncoupled_fraction";
    case FitParam::scale: return "scale";
    case FitParam::t0: return "t0";
    case FitParam::baseline: return "baseline";
  }
  return "?";
}

FitParam parse_fit_param(std::string_view name) {
  for (FitParam p : kAllParams) {
    if (to_string(p) == name) return p;
  }
  if (name == "u") return FitParam::u;
  throw Error(ErrorCode::ParseError, "unknown fit parameter '" + std::string(name) + "'");
}

std::vector<FitParam> default_free_set() {
  return {FitParam::delta2, FitParam::scale, FitParam::baseline, FitParam::t0};
}

FitResult fit_turnoff(const Trace& trace, const LambdaParams& initial,
                      const Nuisance& initial_nuisance, const std::vector<FitParam>& free,
                      const FitOptions& options) {
  if (free.empty()) throw Error(ErrorCode::Usage, "no free parameters");
  for (std::size_t i = 0; i < free.size(); ++i) {
    for (std::size_t j = i + 1; j < free.size(); ++j) {
      if (free[i] == free[j]) throw Error(ErrorCode::Usage, "parameter freed twice");
    }
  }
  if (trace.size() <= free.size()) throw Error(ErrorCode::InvalidTrace, "fewer samples than parameters");

  const Problem problem(trace, {initial, initial_nuisance}, free, options.quantity);
  Eigen::VectorXd x = problem.pack({initial, initial_nuisance});
  Eigen::VectorXd r = problem.residuals(x);
  if (!r.allFinite()) throw Error(ErrorCode::Usage, "initial parameters give a non-finite model");
  double rss = r.squaredNorm();
  Eigen::MatrixXd J = problem.jacobian(x);
  check_identifiable(J, free);

  double lambda = 1e-3;
  int quiet = 0;  // successive iterations meeting a stopping criterion
  FitResult result;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (rss == 0.0 || quiet >= 3) {
      result.converged = true;
      break;
    }
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    Eigen::MatrixXd damped = A;
    damped.diagonal() += lambda * A.diagonal();
    const Eigen::VectorXd step = damped.ldlt().solve(-g);
    const bool tiny = step.norm() < 1e-12 * (1.0 + x.norm());
    const Eigen::VectorXd trial = x + step;
    const Eigen::VectorXd r_trial = problem.residuals(trial);
    const double rss_trial = r_trial.squaredNorm();
    if (std::isfinite(rss_trial) && rss_trial < rss) {
      const double decrease = (rss - rss_trial) / rss;
      x = trial;
      r = r_trial;
      rss = rss_trial;
      J = problem.jacobian(x);
      lambda = std::max(lambda / 10.0, 1e-12);
      quiet = (decrease < 1e-10 || tiny) ? quiet + 1 : 0;
    } else {
      lambda *= 10.0;
      if (tiny) ++quiet;
      if (lambda > 1e16) {
        result.converged = true;
        break;
      }
    }
  }
  if (!result.converged && quiet >= 3) result.converged = true;
  if (!result.converged) {
    throw Error(ErrorCode::NoConvergence,
                "no convergence after " + std::to_string(options.max_iterations) + " iterations");
  }

  const Point best = problem.unpack(x);
  result.params = best.params;
  result.nuisance = best.nuisance;
  result.rss = rss;
  result.iterations = it;
  const Eigen::Index dof = static_cast<Eigen::Index>(trace.size()) - problem.size();
  const Eigen::MatrixXd cov = (J.transpose() * J).inverse() * (rss / static_cast<double>(dof));
  for (Eigen::Index j = 0; j < problem.size(); ++j) {
    result.stderrs[free[j]] = std::sqrt(std::max(cov(j, j), 0.0));
  }
  return result;
}

std::vector<std::pair<double, double>> trace_extrema(const Trace& trace) {
  std::vector<std::pair<double, double>> out;
  const auto& t = trace.times;
  const auto& v = trace.values;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const bool peak = v[i] > v[i - 1] && v[i] > v[i + 1];
    const bool dip = v[i] < v[i - 1] && v[i] < v[i + 1];
    if (!peak && !dip) continue;
    // Parabola through the three samples, in coordinates centred on t[i].
    const double h0 = t[i - 1] - t[i], h2 = t[i + 1] - t[i];
    const double d0 = (v[i - 1] - v[i]) / h0, d2 = (v[i + 1] - v[i]) / h2;
    const double a = (d2 - d0) / (h2 - h0);
    const double b = d0 - a * h0;
    const double s = -b / (2.0 * a);
    out.emplace_back(t[i] + s, v[i] + b * s + a * s * s);
  }
  return out;
}

double envelope_decay(const Trace& trace) {
  const auto ext = trace_extrema(trace);
  if (ext.size() < 3) {
    throw Error(ErrorCode::TooFewExtrema, std::to_string(ext.size()) + " extrema found, need 3");
  }
  // e_k - c alternates in sign with a constant ratio, so each consecutive
  // triple gives an estimate of the asymptote c.
  std::vector<double> estimates;
  for (std::size_t k = 0; k + 2 < ext.size(); ++k) {
    const double e0 = ext[k].second, e1 = ext[k + 1].second, e2 = ext[k + 2].second;
    const double den = e0 + e2 - 2.0 * e1;
    if (den != 0.0) estimates.push_back((e0 * e2 - e1 * e1) / den);
  }
  if (estimates.empty()) throw Error(ErrorCode::TooFewExtrema, "extrema do not alternate");
  std::nth_element(estimates.begin(), estimates.begin() + estimates.size() / 2, estimates.end());
  const double asymptote = estimates[estimates.size() / 2];

  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [t, e] : ext) {
    const double d = std::abs(e - asymptote);
    if (!(d > 0.0)) continue;
    const double y = std::log(d);
    n += 1;
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
  }
  if (n < 3) throw Error(ErrorCode::TooFewExtrema, "too few extrema away from the asymptote");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return cyclic(-slope);
}

double ringing_period(const Trace& trace) {
  const auto ext = trace_extrema(trace);
  if (ext.size() < 2) throw Error(ErrorCode::TooFewExtrema, "need two extrema for a period");
  // Median spacing, so slow drifts distorting the tail do not bias it.
  std::vector<double> gaps;
  for (std::size_t k = 1; k < ext.size(); ++k) gaps.push_back(ext[k].first - ext[k - 1].first);
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  return 2.0 * gaps[gaps.size() / 2];
}

void write_report(std::ostream& out, const FitResult& result) {
  const auto old_precision = out.precision(10);
  const Point x{result.params, result.nuisance};
  for (const auto& [param, err] : result.stderrs) {
    out << to_string(param) << " = " << get(x, param) << " +/- " << err << '\n';
  }
  out << "rss = " << result.rss << '\n';
  out << "converged = " << (result.converged ? "true" : "false") << '\n';
  out.precision(old_precision);
}

}  // namespace eit
