#pragma once

#include <iosfwd>
#include <vector>

#include "eit/model.hpp"
#include "eit/polynomial.hpp"

namespace eit {

/// All complex roots with multiplicity, via eigenvalues of the companion
/// matrix of the radius-normalised polynomial followed by Newton polishing.
/// Each root satisfies |poly(r)| <= 1e-8 max|c| max(1,|r|)^deg, otherwise
/// Error{NoConvergence}. Throws Error{Usage} for degree < 1.
std::vector<cplx> poly_roots(const ComplexPolynomial& poly);

/// numerator(p) / denominator(p); no cancellation is attempted.
struct RationalFunction {
  ComplexPolynomial numerator;
  ComplexPolynomial denominator = ComplexPolynomial::constant(1.0);

  cplx operator()(cplx p) const { return numerator(p) / denominator(p); }

  /// conj(f(conj(p))): conjugates every coefficient.
  RationalFunction conjugated() const {
    return {numerator.conjugated(), denominator.conjugated()};
  }
};

RationalFunction operator+(const RationalFunction& x, const RationalFunction& y);
RationalFunction operator-(const RationalFunction& x, const RationalFunction& y);
RationalFunction operator*(cplx s, const RationalFunction& x);

/// Writes `num: c0 c1 ...` and `den: c0 c1 ...` lines, complex values as
/// `re+imj`.
void dump(std::ostream& out, const RationalFunction& rf);

struct PoleTerm {
  cplx pole;
  cplx residue;
};

/// sum residue / (p - pole) + polynomial_part(p).
struct PoleExpansion {
  std::vector<PoleTerm> terms;
  ComplexPolynomial polynomial_part;

  cplx operator()(cplx p) const;
};

/// Simple-pole expansion. Residues are numerator(P)/denominator'(P).
/// Throws Error{DegeneratePoles} when two poles P, Q have
/// |P - Q| <= 1e-6 max(|P|, |Q|).
PoleExpansion partial_fractions(const RationalFunction& rf);

/// sum residue exp(pole t), t in us with poles in 1/us. The polynomial part
/// only contributes distributions at t = 0 and is ignored.
cplx invert(const PoleExpansion& pe, double t);

/// lim_{p->0} p rf(p). Zero when there is no pole at the origin. Throws
/// Error{UnstablePole} for a pole in the closed right half-plane other than a
/// simple origin pole.
cplx long_time_limit(const RationalFunction& rf);

}  // namespace eit
