#include "eit/ode.hpp"

#include <array>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "eit/error.hpp"
#include "eit/units.hpp"

namespace eit {
namespace {

using State = std::array<double, 8>;
constexpr cplx I{0.0, 1.0};

// Angular-unit rates for one constant-field segment.
struct Rates {
  double half_omega1, half_omega2;
  double delta1, delta2, delta21;
  double gamma_ca, gamma_cb, gamma_ba;
};

Rates rates_for(const LambdaParams& p, const Fields& f) {
  return {0.5 * angular(f.omega1), 0.5 * angular(f.omega2), angular(p.delta1),
          angular(p.delta2),       angular(p.delta21()),    angular(p.gamma_ca),
          angular(p.gamma_cb),     angular(p.gamma_ba)};
}

struct Derivative {
  cplx aa, bb, cc, ab, ac, bc;
};

Derivative bloch(const Rates& r, cplx aa, cplx bb, cplx cc, cplx ab, cplx ac, cplx bc) {
  const cplx ba = std::conj(ab), ca = std::conj(ac), cb = std::conj(bc);
  const double A = r.half_omega1, B = r.half_omega2;
  const double g_sum = r.gamma_ca + r.gamma_cb;
  Derivative d;
  d.aa = r.gamma_ca * cc + I * A * (ca - ac);
  d.ab = (I * r.delta21 - r.gamma_ba) * ab + I * (A * cb - ac * B);
  d.ac = (-I * r.delta1 - 0.5 * g_sum) * ac + I * ((cc - aa) * A - ab * B);
  d.bb = r.gamma_cb * cc + I * B * (cb - bc);
  d.bc = (-I * r.delta2 - 0.5 * g_sum) * bc + I * (-ba * A + (cc - bb) * B);
  d.cc = -g_sum * cc + I * (A * (ac - ca) + B * (bc - cb));
  return d;
}

// Trace-eliminated real form: (aa, bb, Re ab, Im ab, Re ac, Im ac, Re bc, Im bc).
struct LambdaSystem {
  Rates rates;

  void operator()(const State& x, State& dxdt, double /*t*/) const {
    const double aa = x[0], bb = x[1];
    const Derivative d = bloch(rates, aa, bb, 1.0 - aa - bb, {x[2], x[3]}, {x[4], x[5]},
                               {x[6], x[7]});
    dxdt = {d.aa.real(), d.bb.real(), d.ab.real(), d.ab.imag(),
            d.ac.real(), d.ac.imag(), d.bc.real(), d.bc.imag()};
  }
};

State pack(const DensityMatrix& rho) {
  return {rho.aa(), rho.bb(), rho.ab().real(), rho.ab().imag(),
          rho.ac().real(), rho.ac().imag(), rho.bc().real(), rho.bc().imag()};
}

DensityMatrix unpack(const State& x) {
  return DensityMatrix(x[0], x[1], 1.0 - x[0] - x[1], {x[2], x[3]}, {x[4], x[5]}, {x[6], x[7]});
}

Fields fields_at(const FieldSchedule& schedule, const LambdaParams& params, double t) {
  return {omega1_at(schedule, t), probe_active(schedule, t) ? params.omega2 : 0.0};
}

void check_state(const DensityMatrix& rho, double t) {
  if (std::abs(rho.trace() - 1.0) > 1e-6) {
    throw Error(ErrorCode::InvariantBreach, "trace drift at t = " + std::to_string(t));
  }
  if (rho.min_eigenvalue() < -1e-7) {
    throw Error(ErrorCode::InvariantBreach, "negative eigenvalue at t = " + std::to_string(t));
  }
}

}  // namespace

std::vector<double> Trajectory::im_rho_bc() const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.bc().imag());
  return out;
}

Eigen::Matrix3cd bloch_rhs(const Eigen::Matrix3cd& rho, const LambdaParams& params,
                           const Fields& fields) {
  const Derivative d = bloch(rates_for(params, fields), rho(0, 0), rho(1, 1), rho(2, 2),
                             rho(0, 1), rho(0, 2), rho(1, 2));
  Eigen::Matrix3cd out;
  out << d.aa, d.ab, d.ac,
         std::conj(d.ab), d.bb, d.bc,
         std::conj(d.ac), std::conj(d.bc), d.cc;
  return out;
}

Eigen::Matrix3cd rhs(const DensityMatrix& rho, const LambdaParams& params, double omega1_now) {
  return bloch_rhs(rho.matrix(), params, {omega1_now, params.omega2});
}

Trajectory evolve(const DensityMatrix& rho0, const FieldSchedule& schedule,
                  const LambdaParams& params, std::span<const double> t_grid, double rel_tol) {
  namespace odeint = boost::numeric::odeint;
  if (t_grid.empty()) return {};
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= t_grid[i - 1])) throw Error(ErrorCode::Usage, "t_grid must be ascending");
  }
  if (!(rel_tol > 1e-14 && rel_tol < 1e-3)) {
    throw Error(ErrorCode::Usage, "rel_tol must lie in (1e-14, 1e-3)");
  }

  Trajectory out;
  out.times.assign(t_grid.begin(), t_grid.end());
  out.states.reserve(t_grid.size());
  out.states.push_back(rho0);

  const double t_first = t_grid.front();
  const double t_last = t_grid.back();
  std::vector<double> bounds{t_first};
  if (schedule.mode != SwitchMode::Steady && schedule.switch_time > t_first &&
      schedule.switch_time < t_last) {
    bounds.push_back(schedule.switch_time);
  }
  bounds.push_back(t_last);

  // Scale the initial step to the fastest rate present.
  const double fastest = angular(std::abs(params.delta1) + std::abs(params.delta2) +
                                 params.omega1 + schedule.omega1_on + params.omega2 +
                                 params.gamma_ca + params.gamma_cb + params.gamma_ba) + 1.0;

  State x = pack(rho0);
  std::size_t next = 1;  // next grid index to record
  for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
    const double a = bounds[seg], b = bounds[seg + 1];
    if (b <= a) continue;
    const LambdaSystem system{rates_for(params, fields_at(schedule, params, 0.5 * (a + b)))};

    std::vector<double> times{a};
    const std::size_t first_recorded = next;
    while (next < t_grid.size() && t_grid[next] <= b) times.push_back(t_grid[next++]);
    const bool end_on_grid = times.back() == b && times.size() > 1;
    if (!end_on_grid) times.push_back(b);

    std::vector<State> samples;
    auto stepper = odeint::make_dense_output(rel_tol * 1e-2, rel_tol,
                                             odeint::runge_kutta_dopri5<State>());
    try {
      odeint::integrate_times(stepper, system, x, times.begin(), times.end(), 0.01 / fastest,
                              [&](const State& s, double) { samples.push_back(s); },
                              odeint::max_step_checker(2'000'000));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::StepFailure, e.what());
    }
    // samples[0] is the segment start; the rest map onto grid indices.
    for (std::size_t k = first_recorded; k < next; ++k) {
      const DensityMatrix rho = unpack(samples[1 + (k - first_recorded)]);
      check_state(rho, t_grid[k]);
      out.states.push_back(rho);
    }
    x = samples.back();
  }
  return out;
}

DensityMatrix prepare_steady(const LambdaParams& params, const FieldSchedule& schedule,
                             double warmup, Populations initial, double rel_tol) {
  const double gamma = params.gamma();
  if (gamma > 0.0 && warmup < 10.0 / gamma) {
    throw Error(ErrorCode::Usage, "warmup " + std::to_string(warmup) + " us is shorter than 10/gamma");
  }
  const double start = schedule.switch_time - warmup;
  // Hold the pre-switch fields over the whole warmup.
  const FieldSchedule held{SwitchMode::Steady, schedule.switch_time,
                           omega1_at(schedule, start)};
  LambdaParams p = params;
  if (!probe_active(schedule, start)) p.omega2 = 0.0;
  const DensityMatrix rho0(initial.aa, initial.bb, 1.0 - initial.aa - initial.bb);
  const std::array<double, 2> grid{start, schedule.switch_time};
  return evolve(rho0, held, p, grid, rel_tol).states.back();
}

}  // namespace eit
