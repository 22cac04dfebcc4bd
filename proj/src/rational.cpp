#include "eit/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "eit/error.hpp"

namespace eit {
namespace {

double residual_bound(const ComplexPolynomial& poly, cplx root) {
  return 1e-8 * poly.max_abs_coeff() * std::pow(std::max(1.0, std::abs(root)), poly.degree());
}

cplx newton_polish(const ComplexPolynomial& poly, const ComplexPolynomial& deriv, cplx r) {
  double best = std::abs(poly(r));
  for (int it = 0; it < 8 && best > 0.0; ++it) {
    const cplx d = deriv(r);
    if (d == cplx{}) break;
    const cplx next = r - poly(r) / d;
    const double res = std::abs(poly(next));
    if (!(res < best)) break;
    r = next;
    best = res;
  }
  return r;
}

std::string format_complex(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

}  // namespace

std::vector<cplx> poly_roots(const ComplexPolynomial& poly) {
  const int n = poly.degree();
  if (n < 1) throw Error(ErrorCode::Usage, "poly_roots needs degree >= 1");
  const auto& c = poly.coefficients();

  std::vector<cplx> roots;
  int zeros = 0;
  while (c(zeros) == cplx{}) ++zeros;
  roots.assign(static_cast<std::size_t>(zeros), cplx{});
  const int m = n - zeros;
  if (m == 0) return roots;

  // Rescale p = R z so the monic polynomial in z has coefficients of order one.
  const cplx lead = c(n);
  double radius = 0.0;
  for (int k = zeros; k < n; ++k) {
    radius = std::max(radius, std::pow(std::abs(c(k) / lead), 1.0 / (n - k)));
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (int k = 0; k < m; ++k) {
    companion(k, m - 1) = -(c(k + zeros) / lead) * std::pow(radius, double(k - m));
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "companion eigenvalue iteration failed");
  }

  const ComplexPolynomial deriv = poly.derivative();
  for (int k = 0; k < m; ++k) {
    const cplx r = newton_polish(poly, deriv, radius * solver.eigenvalues()(k));
    if (!(std::abs(poly(r)) <= residual_bound(poly, r))) {
      throw Error(ErrorCode::NoConvergence, "root residual above bound at " + format_complex(r));
    }
    roots.push_back(r);
  }
  return roots;
}

RationalFunction operator+(const RationalFunction& x, const RationalFunction& y) {
  if (x.denominator.coefficients() == y.denominator.coefficients()) {
    return {x.numerator + y.numerator, x.denominator};
  }
  return {x.numerator * y.denominator + y.numerator * x.denominator,
          x.denominator * y.denominator};
}

RationalFunction operator-(const RationalFunction& x, const RationalFunction& y) {
  return x + cplx(-1.0) * y;
}

RationalFunction operator*(cplx s, const RationalFunction& x) {
  return {s * x.numerator, x.denominator};
}

void dump(std::ostream& out, const RationalFunction& rf) {
  auto line = [&](const char* tag, const ComplexPolynomial& poly) {
    out << tag << ':';
    for (Eigen::Index k = 0; k < poly.coefficients().size(); ++k) {
      out << ' ' << format_complex(poly.coefficients()(k));
    }
    out << '\n';
  };
  line("num", rf.numerator);
  line("den", rf.denominator);
}

cplx PoleExpansion::operator()(cplx p) const {
  cplx acc = polynomial_part(p);
  for (const auto& term : terms) acc += term.residue / (p - term.pole);
  return acc;
}

PoleExpansion partial_fractions(const RationalFunction& rf) {
  if (rf.denominator.is_zero()) throw Error(ErrorCode::Usage, "zero denominator");
  PoleExpansion out;
  ComplexPolynomial remainder = rf.numerator;
  if (rf.numerator.degree() >= rf.denominator.degree()) {
    rf.numerator.divide(rf.denominator, out.polynomial_part, remainder);
  }
  if (rf.denominator.degree() < 1) return out;

  const std::vector<cplx> poles = poly_roots(rf.denominator);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      const double scale = std::max(std::abs(poles[i]), std::abs(poles[j]));
      if (std::abs(poles[i] - poles[j]) <= 1e-6 * scale) {
        throw Error(ErrorCode::DegeneratePoles,
                    "poles " + format_complex(poles[i]) + " and " + format_complex(poles[j]) +
                        " are not separated");
      }
    }
  }
  const ComplexPolynomial deriv = rf.denominator.derivative();
  out.terms.reserve(poles.size());
  for (cplx r : poles) out.terms.push_back({r, remainder(r) / deriv(r)});
  return out;
}

cplx invert(const PoleExpansion& pe, double t) {
  cplx acc{};
  for (const auto& term : pe.terms) acc += term.residue * std::exp(term.pole * t);
  return acc;
}

cplx long_time_limit(const RationalFunction& rf) {
  if (rf.denominator.is_zero()) throw Error(ErrorCode::Usage, "zero denominator");
  if (rf.denominator.degree() < 1 || rf.numerator.is_zero()) return {};
  const std::vector<cplx> poles = poly_roots(rf.denominator);
  double scale = 1.0;
  for (cplx r : poles) scale = std::max(scale, std::abs(r));
  const double tol = 1e-9 * scale;

  const cplx* origin = nullptr;
  for (const cplx& r : poles) {
    if (std::abs(r) <= tol) {
      if (origin) throw Error(ErrorCode::UnstablePole, "multiple pole at the origin");
      origin = &r;
    } else if (r.real() > -tol) {
      throw Error(ErrorCode::UnstablePole, "pole " + format_complex(r) + " is not damped");
    }
  }
  if (!origin) return {};
  return rf.numerator(*origin) / rf.denominator.derivative()(*origin);
}

}  // namespace eit
