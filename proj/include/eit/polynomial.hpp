#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace eit {

namespace detail {
template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
}  // namespace detail

/// Dense univariate polynomial, coefficients in ascending degree.
/// The zero polynomial has no coefficients and degree -1.
template <typename Scalar>
class Polynomial {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  Polynomial() = default;
  explicit Polynomial(Coefficients coeffs) : c_(std::move(coeffs)) { drop_zeros(); }
  Polynomial(std::initializer_list<Scalar> coeffs)
      : c_(Eigen::Map<const Coefficients>(coeffs.begin(), static_cast<Eigen::Index>(coeffs.size()))) {
    drop_zeros();
  }

  static Polynomial constant(Scalar v) { return Polynomial({v}); }

  /// prod (p - r).
  static Polynomial from_roots(std::span<const Scalar> roots) {
    Polynomial out = constant(Scalar(1));
    for (const Scalar& r : roots) out = out * Polynomial({-r, Scalar(1)});
    return out;
  }

  /// Recovers the coefficients of a polynomial of degree < values.size()
  /// from samples at p_k = radius * exp(i(2 pi k / N + phase)), k = 0..N-1.
  /// Only meaningful for complex scalars.
  static Polynomial interpolate_on_circle(std::span<const Scalar> values, Real radius,
                                          Real phase = 0) {
    static_assert(detail::is_complex<Scalar>::value, "circle interpolation needs complex scalars");
    const auto n = static_cast<Eigen::Index>(values.size());
    Coefficients c(n);
    const Real two_pi = Real(2) * std::acos(Real(-1));
    for (Eigen::Index j = 0; j < n; ++j) {
      Scalar acc(0);
      for (Eigen::Index k = 0; k < n; ++k) {
        const Real angle = -Real(j) * (two_pi * Real(k) / Real(n) + phase);
        acc += values[static_cast<std::size_t>(k)] * Scalar(std::cos(angle), std::sin(angle));
      }
      c(j) = acc / (Real(n) * std::pow(radius, Real(j)));
    }
    return Polynomial(std::move(c));
  }

  const Coefficients& coefficients() const { return c_; }
  Scalar operator[](Eigen::Index k) const { return k < c_.size() ? c_(k) : Scalar(0); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 0; }
  Scalar leading() const { return is_zero() ? Scalar(0) : c_(c_.size() - 1); }

  Real max_abs_coeff() const { return is_zero() ? Real(0) : c_.cwiseAbs().maxCoeff(); }

  /// Largest |c_k| r^k; the natural magnitude of the polynomial on |p| = r.
  Real max_scaled_coeff(Real r) const {
    Real m(0), rk(1);
    for (Eigen::Index k = 0; k < c_.size(); ++k, rk *= r) m = std::max(m, std::abs(c_(k)) * rk);
    return m;
  }

  /// Horner evaluation.
  template <typename Arg>
  auto operator()(const Arg& x) const {
    using R = decltype(Scalar(0) * x);
    R acc(0);
    for (Eigen::Index k = c_.size() - 1; k >= 0; --k) acc = acc * x + c_(k);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    Coefficients d(c_.size() - 1);
    for (Eigen::Index k = 1; k < c_.size(); ++k) d(k - 1) = Real(k) * c_(k);
    return Polynomial(std::move(d));
  }

  /// Drops leading coefficients with |c_k| r^k <= rel_tol * max_j |c_j| r^j.
  /// With r = 1 this is the plain relative trim.
  Polynomial trimmed(Real rel_tol = Real(1e-12), Real r = Real(1)) const {
    const Real cutoff = rel_tol * max_scaled_coeff(r);
    Eigen::Index n = c_.size();
    Real rk = std::pow(r, Real(n - 1));
    while (n > 0 && std::abs(c_(n - 1)) * rk <= cutoff) {
      --n;
      rk /= r;
    }
    return Polynomial(Coefficients(c_.head(n)));
  }

  Polynomial conjugated() const {
    if constexpr (detail::is_complex<Scalar>::value) {
      return Polynomial(Coefficients(c_.conjugate()));
    } else {
      return *this;
    }
  }

  /// Synthetic division by (p - root); the remainder is discarded.
  Polynomial deflated(Scalar root) const {
    if (c_.size() <= 1) return {};
    const Eigen::Index n = c_.size() - 1;
    Coefficients q(n);
    Scalar carry = c_(n);
    for (Eigen::Index k = n - 1; k >= 0; --k) {
      q(k) = carry;
      carry = c_(k) + carry * root;
    }
    return Polynomial(std::move(q));
  }

  /// Long division: *this = quotient * divisor + remainder.
  void divide(const Polynomial& divisor, Polynomial& quotient, Polynomial& remainder) const {
    const int dn = divisor.degree();
    if (degree() < dn) {
      quotient = {};
      remainder = *this;
      return;
    }
    Coefficients r = c_;
    Coefficients q = Coefficients::Zero(degree() - dn + 1);
    const Scalar lead = divisor.leading();
    for (int k = degree() - dn; k >= 0; --k) {
      const Scalar f = r(k + dn) / lead;
      q(k) = f;
      for (int j = 0; j <= dn; ++j) r(k + j) -= f * divisor.c_(j);
    }
    quotient = Polynomial(std::move(q));
    remainder = Polynomial(Coefficients(r.head(std::max(dn, 0))));
  }

  friend Polynomial operator+(const Polynomial& x, const Polynomial& y) {
    Coefficients c = Coefficients::Zero(std::max(x.c_.size(), y.c_.size()));
    c.head(x.c_.size()) += x.c_;
    c.head(y.c_.size()) += y.c_;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& x) { return Polynomial(Coefficients(-x.c_)); }
  friend Polynomial operator-(const Polynomial& x, const Polynomial& y) { return x + (-y); }
  friend Polynomial operator*(const Polynomial& x, const Polynomial& y) {
    if (x.is_zero() || y.is_zero()) return {};
    Coefficients c = Coefficients::Zero(x.c_.size() + y.c_.size() - 1);
    for (Eigen::Index i = 0; i < x.c_.size(); ++i) c.segment(i, y.c_.size()) += x.c_(i) * y.c_;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(Scalar s, const Polynomial& x) { return Polynomial(Coefficients(s * x.c_)); }
  friend Polynomial operator*(const Polynomial& x, Scalar s) { return s * x; }

 private:
  // Exact zeros only; tolerance-based trimming is explicit via trimmed().
  void drop_zeros() {
    Eigen::Index n = c_.size();
    while (n > 0 && c_(n - 1) == Scalar(0)) --n;
    if (n != c_.size()) c_.conservativeResize(n);
  }

  Coefficients c_;
};

using ComplexPolynomial = Polynomial<std::complex<double>>;
using RealPolynomial = Polynomial<double>;

}  // namespace eit
