#include "eit/laplace.hpp"

#include <array>
#include <cmath>
#include <random>

#include "eit/error.hpp"
#include "eit/units.hpp"

namespace eit {
namespace {

constexpr cplx I{0.0, 1.0};
constexpr int kSamples = 32;
constexpr int kChiDegree = 8;
constexpr int kProbes = 20;

// Angular rates entering the transformed equations.
struct Rates {
  double A, B;  // omega1/2, omega2/2
  double d1, d2, d21;
  double gca, gcb, gba;
};

Rates rates_of(const LambdaParams& p) {
  return {0.5 * angular(p.omega1), 0.5 * angular(p.omega2), angular(p.delta1),
          angular(p.delta2),       angular(p.delta21()),    angular(p.gamma_ca),
          angular(p.gamma_cb),     angular(p.gamma_ba)};
}

Rates swapped(const Rates& r) {
  return {r.B, r.A, r.d2, r.d1, -r.d21, r.gcb, r.gca, r.gba};
}

struct Initial {
  cplx aa, bb, cc, ab, ac, bc;
};

Initial initial_of(const DensityMatrix& rho) {
  return {rho.aa(), rho.bb(), rho.cc(), rho.ab(), rho.ac(), rho.bc()};
}

Initial swapped(const Initial& x) {
  return {x.bb, x.aa, x.cc, std::conj(x.ab), x.bc, x.ac};
}

// Coefficients of (r_ac, r_ca, r_bc, r_cb) and right-hand side of the r_ac
// equation.
using Row = Eigen::Matrix<cplx, 1, 5>;

Row row_ac(cplx p, const Rates& r, const Initial& x) {
  const double g = r.gca + r.gcb;
  const cplx s = (r.gca - p) / (p + g);
  const cplx q = p - I * r.d21 + r.gba;
  const double A2 = r.A * r.A, AB = r.A * r.B, B2 = r.B * r.B;
  Row row;
  row << p + I * r.d1 + 0.5 * g + A2 / p * (1.0 - s) + B2 / q,
         A2 / p * (s - 1.0),
         -AB / p * s,
         AB / p * (s - p / q),
         x.ac - I / p * r.A * (x.aa + x.cc * s) - I * r.B * x.ab / q;
  return row;
}

// Complex conjugation with p held real: ac <-> ca, bc <-> cb.
Row conjugate_rule(const Row& row) {
  Row out;
  out << std::conj(row(1)), std::conj(row(0)), std::conj(row(3)), std::conj(row(2)),
      std::conj(row(4));
  return out;
}

// Label interchange a <-> b: the swapped equation for "ac" is the one for bc.
Row interchange_rule(const Row& row) {
  Row out;
  out << row(2), row(3), row(0), row(1), row(4);
  return out;
}

CoherenceSystem build_system(const Rates& r, const Initial& x, cplx p) {
  const Rates rs = swapped(r);
  const Initial xs = swapped(x);
  const cplx pc = std::conj(p);
  Eigen::Matrix<cplx, 4, 5> rows;
  rows.row(0) = row_ac(p, r, x);
  rows.row(1) = conjugate_rule(row_ac(pc, r, x));
  rows.row(2) = interchange_rule(row_ac(p, rs, xs));
  rows.row(3) = conjugate_rule(interchange_rule(row_ac(pc, rs, xs)));
  return {rows.leftCols<4>(), rows.col(4)};
}

// Sampling circle for evaluation-interpolation.
struct Circle {
  double radius;
  double phase;

  cplx point(int k) const {
    return std::polar(radius, two_pi * k / kSamples + phase);
  }
};

Circle circle_for(const Rates& r, double stretch = 1.0) {
  const double scale = std::max({2.0 * r.A, 2.0 * r.B, std::abs(r.d1), std::abs(r.d2),
                                 std::abs(r.d21), r.gca + r.gcb, r.gba, 1.0});
  return {1.5 * scale * stretch, 0.1 * std::numbers::sqrt2};
}

// Interpolates the samples, requires everything above degree_bound to be
// negligible against `reference` (a magnitude on the circle) and trims.
ComplexPolynomial fit(const std::array<cplx, kSamples>& values, const Circle& c, int degree_bound,
                      double reference) {
  const ComplexPolynomial full = ComplexPolynomial::interpolate_on_circle(values, c.radius, c.phase);
  double tail = 0.0, rk = 1.0;
  const auto& coeffs = full.coefficients();
  for (Eigen::Index k = 0; k < coeffs.size(); ++k, rk *= c.radius) {
    if (k > degree_bound) tail = std::max(tail, std::abs(coeffs(k)) * rk);
  }
  const double ref = std::max(reference, full.max_scaled_coeff(c.radius));
  if (tail > 1e-8 * ref) {
    throw Error(ErrorCode::InterpolationMismatch,
                "interpolant exceeds degree " + std::to_string(degree_bound));
  }
  ComplexPolynomial::Coefficients head = coeffs.head(std::min<Eigen::Index>(coeffs.size(), degree_bound + 1));
  // Drop leading coefficients that are noise relative to the reference scale.
  Eigen::Index n = head.size();
  while (n > 0 && std::abs(head(n - 1)) * std::pow(c.radius, double(n - 1)) <= 1e-12 * ref) --n;
  return ComplexPolynomial(ComplexPolynomial::Coefficients(head.head(n)));
}

void require_equal_decay(const LambdaParams& p) {
  if (p.gamma_ca != p.gamma_cb) {
    throw Error(ErrorCode::Unsupported, "closed forms need gamma_ca == gamma_cb");
  }
}

}  // namespace

ComplexPolynomial pump_denominator(const LambdaParams& params) {
  const double g = angular(params.gamma()), d2 = angular(params.delta2);
  const double B = 0.5 * angular(params.omega2);
  const ComplexPolynomial p{0.0, 1.0};
  const ComplexPolynomial p_g{g, 1.0};
  const ComplexPolynomial lorentz = ComplexPolynomial{d2 * d2, 0.0} + p_g * p_g;
  return p * ComplexPolynomial{2.0 * g, 1.0} * lorentz +
         cplx(2.0 * B * B) * p_g * ComplexPolynomial{g, 2.0};
}

ElementMap pump_system(const LambdaParams& params, const DensityMatrix& rho0) {
  if (params.omega1 != 0.0) throw Error(ErrorCode::Unsupported, "pump_system needs omega1 = 0");
  if (!rho0.is_diagonal()) throw Error(ErrorCode::Unsupported, "pump_system needs a diagonal rho0");
  require_equal_decay(params);

  const double g = angular(params.gamma()), d2 = angular(params.delta2);
  const double B = 0.5 * angular(params.omega2);
  const double aa = rho0.aa(), bb = rho0.bb();
  const ComplexPolynomial p{0.0, 1.0};
  const ComplexPolynomial p_g{g, 1.0};
  const ComplexPolynomial lorentz = ComplexPolynomial{d2 * d2, 0.0} + p_g * p_g;
  const ComplexPolynomial D = pump_denominator(params);

  ElementMap out;
  out[Element::bc] = {cplx(-B) * ComplexPolynomial{g * (1.0 - aa + bb), 2.0 * bb + aa - 1.0} *
                          ComplexPolynomial{cplx(d2, g), I},
                      D};
  out[Element::cb] = out[Element::bc].conjugated();
  out[Element::aa] = {p * ComplexPolynomial{g + aa * g - bb * g, aa} * lorentz +
                          cplx(2.0 * B * B) * p_g * ComplexPolynomial{g, 2.0 * aa},
                      p * D};
  out[Element::bb] = {ComplexPolynomial{g * (1.0 - aa + bb), bb} * lorentz +
                          cplx(2.0 * B * B * (1.0 - aa)) * p_g,
                      D};
  return out;
}

cplx p4_approx(const LambdaParams& params) {
  const double g = angular(params.gamma()), d2 = angular(params.delta2);
  const double B = 0.5 * angular(params.omega2);
  return -B * B * g / (d2 * d2 + g * g);
}

CoherenceSystem coherence_system(const LambdaParams& params, const DensityMatrix& rho0, cplx p) {
  return build_system(rates_of(params), initial_of(rho0), p);
}

ElementMap turnon_system(const LambdaParams& params, const DensityMatrix& rho0) {
  const Rates r = rates_of(params);
  const Initial x = initial_of(rho0);
  const double g = r.gca + r.gcb;

  // chi(p) = det M(p) p (p + g) q(p) qbar(p) is a monic octic; the transforms
  // share the denominator p chi(p).
  std::array<cplx, kSamples> chi{};
  std::array<std::array<cplx, kSamples>, 4> numer{};
  Circle circle{};
  bool ok = false;
  for (int attempt = 0; attempt < 6 && !ok; ++attempt) {
    circle = circle_for(r, 1.0 + 0.37 * attempt);
    ok = true;
    for (int k = 0; k < kSamples && ok; ++k) {
      const cplx p = circle.point(k);
      const CoherenceSystem sys = build_system(r, x, p);
      const Eigen::FullPivLU<Eigen::Matrix4cd> lu(sys.matrix);
      const cplx det = lu.determinant();
      if (lu.rank() < 4 || !std::isfinite(std::abs(det))) {
        ok = false;
        break;
      }
      const Eigen::Vector4cd sol = lu.solve(sys.rhs);
      chi[k] = det * p * (p + g) * (p - I * r.d21 + r.gba) * (p + I * r.d21 + r.gba);
      const cplx P = p * chi[k];
      for (int i = 0; i < 4; ++i) numer[i][k] = sol(i) * P;
    }
  }
  if (!ok) throw Error(ErrorCode::SingularSystem, "coherence system singular on every sampling circle");

  const ComplexPolynomial chi_poly = fit(chi, circle, kChiDegree, 0.0);
  const ComplexPolynomial P = ComplexPolynomial{0.0, 1.0} * chi_poly;
  const double unit = P.max_scaled_coeff(circle.radius) / circle.radius;

  ElementMap out;
  const std::array<Element, 4> order{Element::ac, Element::ca, Element::bc, Element::cb};
  for (int i = 0; i < 4; ++i) out[order[i]] = {fit(numer[i], circle, kChiDegree, unit), P};

  // Substitute back at random points off the circle.
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> rad(0.2 * circle.radius, 2.0 * circle.radius);
  std::uniform_real_distribution<double> ang(0.0, two_pi);
  for (int k = 0; k < kProbes; ++k) {
    const cplx p = std::polar(rad(rng), ang(rng));
    const CoherenceSystem sys = build_system(r, x, p);
    Eigen::Vector4cd sol;
    for (int i = 0; i < 4; ++i) sol(i) = out[order[i]](p);
    const double residual = (sys.matrix * sol - sys.rhs).cwiseAbs().maxCoeff();
    const double scale = sys.matrix.cwiseAbs().rowwise().sum().maxCoeff() * sol.cwiseAbs().maxCoeff() +
                         sys.rhs.cwiseAbs().maxCoeff();
    if (!(residual <= 1e-9 * scale)) {
      throw Error(ErrorCode::InterpolationMismatch,
                  "residual " + std::to_string(residual / scale) + " at probe point");
    }
  }
  return out;
}

ElementMap reconstruct_remaining(const ElementMap& coherences, const DensityMatrix& rho0,
                                 const LambdaParams& params) {
  const Rates r = rates_of(params);
  const Initial x = initial_of(rho0);
  const double g = r.gca + r.gcb;
  const ComplexPolynomial& P = coherences.at(Element::ac).denominator;
  const Circle circle = circle_for(r);

  const std::array<Element, 5> order{Element::ab, Element::ba, Element::aa, Element::bb, Element::cc};
  std::array<std::array<cplx, kSamples>, 5> numer{};
  for (int k = 0; k < kSamples; ++k) {
    const cplx p = circle.point(k);
    const cplx ac = coherences.at(Element::ac)(p), ca = coherences.at(Element::ca)(p);
    const cplx bc = coherences.at(Element::bc)(p), cb = coherences.at(Element::cb)(p);
    const cplx ab = (x.ab + I * r.A * cb - I * r.B * ac) / (p - I * r.d21 + r.gba);
    const cplx ba = (std::conj(x.ab) + I * r.B * ca - I * r.A * bc) / (p + I * r.d21 + r.gba);
    const cplx cc = (x.cc + I * r.A * (ac - ca) + I * r.B * (bc - cb)) / (p + g);
    const cplx aa = (x.aa + r.gca * cc + I * r.A * (ca - ac)) / p;
    const cplx bb = (x.bb + r.gcb * cc + I * r.B * (cb - bc)) / p;
    const std::array<cplx, 5> values{ab, ba, aa, bb, cc};
    const cplx Pk = P(p);
    for (int i = 0; i < 5; ++i) numer[i][k] = values[i] * Pk;
  }

  const double unit = P.max_scaled_coeff(circle.radius) / circle.radius;
  ElementMap out;
  for (int i = 0; i < 5; ++i) out[order[i]] = {fit(numer[i], circle, P.degree() - 1, unit), P};
  return out;
}

}  // namespace eit
