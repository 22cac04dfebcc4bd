#include "eit/observe.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "eit/analytic.hpp"
#include "eit/error.hpp"
#include "eit/laplace.hpp"
#include "eit/ode.hpp"

namespace eit {
namespace {

void require_ascending(std::span<const double> axis, const char* name) {
  if (axis.empty()) throw Error(ErrorCode::Usage, std::string(name) + " is empty");
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) {
      throw Error(ErrorCode::Usage, std::string(name) + " must be strictly ascending");
    }
  }
}

double default_warmup(const LambdaParams& p) { return 10.0 / p.gamma(); }

Eigen::RowVectorXd ode_row(const LambdaParams& p, const FieldSchedule& schedule,
                           std::span<const double> times, const ScanOptions& opt) {
  const double warmup = opt.warmup > 0.0 ? opt.warmup : default_warmup(p);
  const double anchor = schedule.mode == SwitchMode::Steady ? times.front() : schedule.switch_time;
  const double start = std::min(anchor - warmup, times.front());
  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  if (start < times.front()) grid.push_back(start);
  grid.insert(grid.end(), times.begin(), times.end());
  const DensityMatrix rho0(opt.rho_aa_start, opt.rho_bb_start,
                           1.0 - opt.rho_aa_start - opt.rho_bb_start);
  const Trajectory tr = evolve(rho0, schedule, p, grid, opt.rel_tol);
  const std::size_t offset = grid.size() - times.size();
  Eigen::RowVectorXd row(static_cast<Eigen::Index>(times.size()));
  for (std::size_t j = 0; j < times.size(); ++j) row(j) = tr.states[offset + j].bc().imag();
  return row;
}

Eigen::RowVectorXd analytic_row(const LambdaParams& p, const FieldSchedule& schedule,
                                std::span<const double> times, const ScanOptions& opt) {
  Eigen::RowVectorXd row(static_cast<Eigen::Index>(times.size()));
  LambdaParams on = p;
  on.omega1 = schedule.omega1_on;
  switch (schedule.mode) {
    case SwitchMode::Steady: {
      row.setConstant(steady_eit_lineshape(on));
      return row;
    }
    case SwitchMode::TurnOff: {
      const double before = steady_eit_lineshape(on);
      for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j] - schedule.switch_time;
        row(j) = t < 0.0 ? before : turnoff_im_rbc(on, t);
      }
      return row;
    }
    case SwitchMode::TurnOn: {
      if (p.delta1 != 0.0 || p.delta2 != 0.0) {
        throw Error(ErrorCode::EngineUnsupported,
                    "analytic turn-on needs delta1 = delta2 = 0 (row delta2 = " +
                        std::to_string(p.delta2) + ")");
      }
      // Probe-only pumping from the start populations, then the resonant
      // strong-coupling response.
      LambdaParams probe = p;
      probe.omega1 = 0.0;
      const DensityMatrix start(opt.rho_aa_start, opt.rho_bb_start,
                                1.0 - opt.rho_aa_start - opt.rho_bb_start);
      const ElementMap pump = pump_system(probe, start);
      const PoleExpansion bc = partial_fractions(pump.at(Element::bc));
      const PoleExpansion aa = partial_fractions(pump.at(Element::aa));
      const PoleExpansion bb = partial_fractions(pump.at(Element::bb));
      const double warmup = opt.warmup > 0.0 ? opt.warmup : default_warmup(p);
      const double t_on = warmup;
      const double aa0 = invert(aa, t_on).real(), bb0 = invert(bb, t_on).real();
      const DensityMatrix at_switch(aa0, bb0, 1.0 - aa0 - bb0, {}, {}, invert(bc, t_on));
      for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j] - schedule.switch_time;
        if (t < 0.0) {
          row(j) = t + warmup < 0.0 ? 0.0 : invert(bc, t + warmup).imag();
        } else {
          row(j) = turnon_phi(at_switch, on, t, p.gamma_ba > 0.0).total();
        }
      }
      return row;
    }
    case SwitchMode::BothOn:
      break;
  }
  throw Error(ErrorCode::EngineUnsupported, "no analytic form for " +
                                                std::string(to_string(schedule.mode)));
}

}  // namespace

double transmission(double im_rho_bc, const LambdaParams& params) {
  if (!(params.omega2 > 0.0)) throw Error(ErrorCode::Usage, "transmission needs omega2 > 0");
  const double g = params.gamma(), d2 = params.delta2, u = params.uncoupled_fraction;
  const double half = 0.5 * params.omega2;
  const double absorption = (1.0 - u) * (-im_rho_bc) + u * half * g / (g * g + d2 * d2);
  return 1.0 - absorption / (half / g);
}

std::vector<std::pair<double, double>> spectrum(const LambdaParams& params,
                                                std::span<const double> delta2_axis) {
  std::vector<std::pair<double, double>> out;
  out.reserve(delta2_axis.size());
  for (double d2 : delta2_axis) {
    LambdaParams p = params;
    p.delta2 = d2;
    out.emplace_back(d2, transmission(steady_eit_lineshape(p), p));
  }
  return out;
}

std::string_view to_string(Engine e) { return e == Engine::ODE ? "ode" : "analytic"; }

Engine parse_engine(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ode") return Engine::ODE;
  if (lower == "analytic") return Engine::Analytic;
  throw Error(ErrorCode::ParseError, "unknown engine '" + std::string(text) + "'");
}

std::string_view to_string(Quantity q) {
  return q == Quantity::ImRhoBC ? "im_rho_bc" : "transmission";
}

ScanGrid scan(const LambdaParams& params, const FieldSchedule& schedule,
              std::span<const double> delta2_axis, std::span<const double> time_axis,
              const ScanOptions& options) {
  require_ascending(delta2_axis, "delta2 axis");
  require_ascending(time_axis, "time axis");
  validate(params);

  ScanGrid grid;
  grid.delta2_axis.assign(delta2_axis.begin(), delta2_axis.end());
  grid.time_axis.assign(time_axis.begin(), time_axis.end());
  grid.mode = schedule.mode;
  grid.quantity = options.quantity;
  const auto rows = static_cast<Eigen::Index>(delta2_axis.size());
  grid.values.resize(rows, static_cast<Eigen::Index>(time_axis.size()));

  auto compute = [&](Eigen::Index i) {
    LambdaParams p = params;
    p.delta2 = delta2_axis[static_cast<std::size_t>(i)];
    Eigen::RowVectorXd row = options.engine == Engine::ODE
                                 ? ode_row(p, schedule, time_axis, options)
                                 : analytic_row(p, schedule, time_axis, options);
    if (options.quantity == Quantity::Transmission) {
      for (Eigen::Index j = 0; j < row.size(); ++j) row(j) = transmission(row(j), p);
    }
    grid.values.row(i) = row;
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(rows));
  if (threads == 1) {
    for (Eigen::Index i = 0; i < rows; ++i) compute(i);
    return grid;
  }

  std::atomic<Eigen::Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (Eigen::Index i = next++; i < rows; i = next++) {
        try {
          compute(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = rows;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return grid;
}

std::vector<RabiCurve> rabi_peak_curves(double omega1, int n_max, std::span<const double> time_axis) {
  if (n_max < 1) throw Error(ErrorCode::Usage, "n_max must be at least 1");
  std::vector<RabiCurve> out;
  for (int n = 1; n <= n_max; ++n) {
    for (int sign : {+1, -1}) {
      RabiCurve curve{n, sign, {}};
      curve.delta2.reserve(time_axis.size());
      for (double t : time_axis) {
        curve.delta2.push_back(t > 0.0 ? sign * n / t + 0.5 * omega1
                                       : std::numeric_limits<double>::quiet_NaN());
      }
      out.push_back(std::move(curve));
    }
  }
  return out;
}

void write_scan_csv(std::ostream& out, const ScanGrid& grid) {
  const auto old_precision = out.precision(17);
  out << "t_us";
  for (double t : grid.time_axis) out << ',' << t;
  out << '\n';
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    out << grid.delta2_axis[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) out << ',' << grid.values(i, j);
    out << '\n';
  }
  out.precision(old_precision);
}

void write_ppm(std::ostream& out, const ScanGrid& grid) {
  const Eigen::Index rows = grid.values.rows(), cols = grid.values.cols();
  double range = rows && cols ? grid.values.cwiseAbs().maxCoeff() : 0.0;
  if (!(range > 0.0)) range = 1.0;
  out << "P6\n" << cols << ' ' << rows << "\n255\n";
  auto channel = [](double x) {
    return static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * std::clamp(x, 0.0, 1.0))));
  };
  for (Eigen::Index i = rows - 1; i >= 0; --i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double x = std::clamp(grid.values(i, j) / range, -1.0, 1.0);
      const double fade = 1.0 - std::abs(x);
      const char rgb[3] = {channel(x < 0.0 ? fade : 1.0), channel(fade),
                           channel(x > 0.0 ? fade : 1.0)};
      out.write(rgb, 3);
    }
  }
}

}  // namespace eit
