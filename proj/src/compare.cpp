#include "eit/compare.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "eit/analytic.hpp"
#include "eit/error.hpp"
#include "eit/laplace.hpp"
#include "eit/ode.hpp"
#include "eit/rational.hpp"

namespace eit {
namespace {

double laplace_im_bc_max_diff(const LambdaParams& params, const DensityMatrix& rho0,
                              std::span<const double> times, const std::vector<double>& reference,
                              double t_offset) {
  const ElementMap system = turnon_system(params, rho0);
  const PoleExpansion bc = partial_fractions(system.at(Element::bc));
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    worst = std::max(worst, std::abs(invert(bc, times[i] - t_offset).imag() - reference[i]));
  }
  return worst;
}

}  // namespace

LambdaParams random_weak_probe_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double gamma = 4.0 + 3.0 * unit(rng);
  const double omega1 = gamma * (2.0 + 8.0 * unit(rng));
  const double omega2 = gamma * (0.01 + 0.04 * unit(rng));
  const double delta1 = omega1 * (4.0 * unit(rng) - 2.0);
  const double delta2 = omega1 * (4.0 * unit(rng) - 2.0);
  const double gamma_ba = 0.6 * gamma * unit(rng);
  return LambdaParams::with_equal_decay(omega1, omega2, delta1, delta2, gamma, gamma_ba, 0.2);
}

double turnoff_tolerance(const LambdaParams& params) {
  const double r = params.omega2 / params.gamma();
  return 10.0 * r * r * (0.5 * r);
}

TurnoffComparison compare_turnoff(const LambdaParams& params, std::span<const double> times) {
  if (times.empty() || times.front() < 0.0) {
    throw Error(ErrorCode::Usage, "turn-off comparison needs times >= 0");
  }
  const FieldSchedule schedule{SwitchMode::TurnOff, 0.0, params.omega1};
  // Slowest coupled relaxation is the ground-coherence pumping rate.
  const double warmup = 60.0 / params.gamma();
  std::vector<double> grid{-warmup};
  if (times.front() > 0.0) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());
  const Trajectory tr = evolve(DensityMatrix(), schedule, params, grid);
  const std::size_t offset = grid.size() - times.size();
  const DensityMatrix& at_switch = tr.states[1];

  std::vector<double> ode(times.size());
  TurnoffComparison out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    ode[i] = tr.states[offset + i].bc().imag();
    out.analytic_vs_ode = std::max(out.analytic_vs_ode, std::abs(turnoff_im_rbc(params, times[i]) - ode[i]));
  }
  LambdaParams off = params;
  off.omega1 = 0.0;
  out.laplace_vs_ode = laplace_im_bc_max_diff(off, at_switch, times, ode, 0.0);
  return out;
}

double compare_turnon(const LambdaParams& params, const DensityMatrix& rho0,
                      std::span<const double> times) {
  const FieldSchedule schedule{SwitchMode::Steady, times.front(), params.omega1};
  const Trajectory tr = evolve(rho0, schedule, params, times);
  return laplace_im_bc_max_diff(params, rho0, times, tr.im_rho_bc(), times.front());
}

}  // namespace eit
