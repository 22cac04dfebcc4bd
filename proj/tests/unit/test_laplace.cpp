#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "eit/error.hpp"
#include "eit/laplace.hpp"
#include "eit/ode.hpp"
#include "eit/rational.hpp"
#include "eit/units.hpp"
#include "oracles.hpp"

using namespace eit;

namespace {

std::vector<double> grid(double t_end, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_end * i / (n - 1);
  return t;
}

cplx random_p(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {scale * (0.2 + std::abs(u(rng))), scale * u(rng)};
}

}  // namespace

TEST_CASE("pump denominator is the closed-form quartic") {
  const LambdaParams p = LambdaParams::with_equal_decay(0.0, 1.0, 0.0, 3.0, 5.68, 0.0);
  const ComplexPolynomial D = pump_denominator(p);
  CHECK(D.degree() == 4);
  const double g = angular(5.68), d2 = angular(3.0), B = angular(1.0) / 2;
  for (cplx s : {cplx(1.0, 2.0), cplx(-7.0, 30.0), cplx(0.1, 0.0)}) {
    const cplx expected = s * (s + 2.0 * g) * (d2 * d2 + (s + g) * (s + g)) +
                          2.0 * (s + g) * (2.0 * s + g) * B * B;
    CHECK(std::abs(D(s) / expected - D[4]) < 1e-12 * std::abs(D[4]));
  }
}

TEST_CASE("pump transforms match the master-equation resolvent") {
  const LambdaParams p = LambdaParams::with_equal_decay(0.0, 2.0, 0.0, -4.0, 5.68, 1.0);
  const DensityMatrix rho0(0.3, 0.6, 0.1);
  const ElementMap pump = pump_system(p, rho0);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const cplx s = random_p(rng, 50.0);
    const Eigen::Matrix3cd r = oracle::resolvent(p, 0.0, 2.0, rho0.matrix(), s);
    CHECK(std::abs(pump.at(Element::aa)(s) - r(0, 0)) < 1e-11 * (1.0 + std::abs(r(0, 0))));
    CHECK(std::abs(pump.at(Element::bb)(s) - r(1, 1)) < 1e-11 * (1.0 + std::abs(r(1, 1))));
    CHECK(std::abs(pump.at(Element::bc)(s) - r(1, 2)) < 1e-11 * (1.0 + std::abs(r(1, 2))));
    CHECK(std::abs(pump.at(Element::cb)(s) - r(2, 1)) < 1e-11 * (1.0 + std::abs(r(2, 1))));
  }
}

TEST_CASE("pump limits and the small root") {
  const LambdaParams p = LambdaParams::with_equal_decay(0.0, 1.0, 0.0, 0.0, 5.68, 0.0);
  const ElementMap pump = pump_system(p, DensityMatrix());
  CHECK(std::abs(long_time_limit(pump.at(Element::aa)) - 1.0) < 1e-12);
  CHECK(std::abs(long_time_limit(pump.at(Element::bb))) < 1e-12);
  CHECK(std::abs(long_time_limit(pump.at(Element::bc))) < 1e-12);

  const ElementMap pumped = pump_system(p, DensityMatrix(1.0, 0.0, 0.0));
  CHECK(pumped.at(Element::bc).numerator.max_abs_coeff() < 1e-12);

  const auto roots = poly_roots(pump_denominator(p));
  cplx p4{};
  double smallest = 1e300;
  for (cplx r : roots) {
    if (std::abs(r) > 0.0 && std::abs(r) < smallest) {
      smallest = std::abs(r);
      p4 = r;
    }
  }
  CHECK(std::abs(p4.imag()) < 1e-9);
  const cplx approx = p4_approx(p);
  CHECK(cyclic(approx.real()) == doctest::Approx(-0.25 / 5.68).epsilon(1e-12));
  CHECK(std::abs(approx - p4) / std::abs(p4) < 0.05);

  LambdaParams far = p;
  far.delta2 = 500.0;
  CHECK(p4_approx(far).real() < 0.0);
  CHECK(p4_approx(far).real() > -1e-3);
  LambdaParams dark = p;
  dark.omega2 = 0.0;
  CHECK(p4_approx(dark) == cplx(0.0));
}

TEST_CASE("pump inversion follows the ODE") {
  const LambdaParams p = LambdaParams::with_equal_decay(0.0, 1.5, 0.0, 2.0, 5.68, 0.7);
  const DensityMatrix rho0(0.05, 0.95, 0.0);
  const ElementMap pump = pump_system(p, rho0);
  const PoleExpansion aa = partial_fractions(pump.at(Element::aa));
  const PoleExpansion bc = partial_fractions(pump.at(Element::bc));
  const auto t = grid(3.0, 61);
  const Trajectory tr = evolve(rho0, {}, p, t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(std::abs(invert(aa, t[i]).real() - tr.states[i].aa()) < 1e-8);
    CHECK(std::abs(invert(bc, t[i]) - tr.states[i].bc()) < 1e-8);
  }
}

TEST_CASE("pump preconditions") {
  const LambdaParams coupled = LambdaParams::with_equal_decay(10.0, 1.0, 0.0, 0.0, 5.68, 0.0);
  CHECK_THROWS_AS(pump_system(coupled, DensityMatrix()), Error);
  const LambdaParams p = LambdaParams::with_equal_decay(0.0, 1.0, 0.0, 0.0, 5.68, 0.0);
  Eigen::Vector3cd psi(0.6, 0.8, 0.0);
  try {
    pump_system(p, DensityMatrix::pure(psi));
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
}

TEST_CASE("coherence transforms match the master-equation resolvent") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const LambdaParams p{30.0 + 15.0 * u(rng), 3.0 + u(rng), 20.0 * u(rng), 20.0 * u(rng),
                         4.0 + u(rng), 6.0 + u(rng), 2.0 + u(rng), 0.2};
    Eigen::Vector3cd psi(cplx(0.5, 0.1), cplx(0.7, -0.2), cplx(0.3, 0.3));
    const DensityMatrix rho0 = DensityMatrix::pure(psi / psi.norm());
    const ElementMap coh = turnon_system(p, rho0);
    const ElementMap all = reconstruct_remaining(coh, rho0, p);
    for (int k = 0; k < 5; ++k) {
      const cplx s = random_p(rng, 200.0);
      const Eigen::Matrix3cd r = oracle::resolvent(p, p.omega1, p.omega2, rho0.matrix(), s);
      auto close = [&](Element e, cplx want) {
        const cplx got = (coh.count(e) ? coh : all).at(e)(s);
        return std::abs(got - want) < 1e-8 * (1.0 + std::abs(want));
      };
      CHECK(close(Element::bc, r(1, 2)));
      CHECK(close(Element::cb, r(2, 1)));
      CHECK(close(Element::ac, r(0, 2)));
      CHECK(close(Element::ca, r(2, 0)));
      CHECK(close(Element::ab, r(0, 1)));
      CHECK(close(Element::ba, r(1, 0)));
      CHECK(close(Element::aa, r(0, 0)));
      CHECK(close(Element::bb, r(1, 1)));
      CHECK(close(Element::cc, r(2, 2)));
    }
  }
}

TEST_CASE("coherence transforms solve the four-coherence linear system") {
  const LambdaParams p{45.0, 1.0, -23.0, 10.0, 5.0, 6.0, 3.4, 0.2};
  const DensityMatrix rho0(0.05, 0.95, 0.0);
  const ElementMap coh = turnon_system(p, rho0);
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const cplx s = random_p(rng, 400.0);
    const CoherenceSystem sys = coherence_system(p, rho0, s);
    const Eigen::Vector4cd x(coh.at(Element::ac)(s), coh.at(Element::ca)(s), coh.at(Element::bc)(s),
                             coh.at(Element::cb)(s));
    const double scale = sys.matrix.norm() * x.norm() + sys.rhs.norm();
    CHECK((sys.matrix * x - sys.rhs).norm() <= 1e-9 * scale);
  }
}

TEST_CASE("turn-on reduces to pumping without coupling") {
  const LambdaParams p = LambdaParams::with_equal_decay(0.0, 1.0, 0.0, 4.0, 5.68, 1.0);
  const DensityMatrix rho0(0.05, 0.95, 0.0);
  const ElementMap coh = turnon_system(p, rho0);
  const ElementMap pump = pump_system(p, rho0);
  for (cplx s : {cplx(3.0, 1.0), cplx(-10.0, 40.0), cplx(0.5, -80.0)}) {
    const cplx want = pump.at(Element::bc)(s);
    CHECK(std::abs(coh.at(Element::bc)(s) - want) < 1e-9 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("turn-on inversion follows the ODE for arbitrary detunings") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto t = grid(1.0, 200);
  for (int trial = 0; trial < 3; ++trial) {
    const LambdaParams p = LambdaParams::with_equal_decay(
        45.0 + 10.0 * u(rng), 1.0, 40.0 * u(rng), 40.0 * u(rng), 5.68, 3.4 * std::abs(u(rng)));
    const DensityMatrix rho0(0.05, 0.95, 0.0);
    const PoleExpansion bc = partial_fractions(turnon_system(p, rho0).at(Element::bc));
    const Trajectory tr = evolve(rho0, {SwitchMode::Steady, 0.0, p.omega1}, p, t);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      worst = std::max(worst, std::abs(invert(bc, t[i]).imag() - tr.states[i].bc().imag()));
    }
    CHECK(worst < 1e-6);
  }
}
