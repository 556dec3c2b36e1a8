#ifndef GENCS_SPECFUN_HPP
#define GENCS_SPECFUN_HPP

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "gencs/errors.hpp"

namespace gencs {

using cplx = std::complex<double>;

/// Partial sum of a hypergeometric series.
///
/// `tail_bound` is the magnitude of the last term that was added. It is a
/// heuristic error estimate, not a rigorous bound; for a terminating
/// (polynomial) series it is exactly zero.
struct SeriesResult {
  cplx value;
  int terms_used = 0;
  double tail_bound = 0.0;
};

inline constexpr int kSeriesTermCap = 10000;
inline constexpr double kDefaultSeriesTol = 1e-16;

/// Generalized hypergeometric series pFq(numer; denom; x).
///
/// Stops once |term| < tol * |sum| for three consecutive terms while the terms
/// are shrinking, or exactly when a numerator parameter is a nonpositive
/// integer. Throws DenominatorPole, NonConvergent (including |x| >= 1 for
/// p = q + 1 and non-finite partial sums) or DomainViolation (p > q + 1).
SeriesResult hyp_pFq(std::span<const cplx> numer, std::span<const cplx> denom, cplx x,
                     double tol = kDefaultSeriesTol);

cplx hyp0f1(cplx b, cplx x, double tol = kDefaultSeriesTol);
cplx hyp1f1(cplx a, cplx b, cplx x, double tol = kDefaultSeriesTol);

/// A complex number stored as mantissa * exp(log_scale), for values whose
/// modulus leaves the double range only transiently.
struct ScaledComplex {
  cplx mantissa;
  double log_scale = 0.0;
  cplx value() const { return mantissa * std::exp(log_scale); }
};

/// 1F1 through the Euler integral
///   Gamma(b)/(Gamma(a)Gamma(b-a)) int_0^1 e^{xt} t^{a-1} (1-t)^{b-a-1} dt,
/// evaluated as a ratio of two Gauss-Legendre quadratures so that the Beta
/// prefactor never has to be formed. Requires Re a >= 1 and Re(b-a) >= 1.
/// Accurate for large |x| and large parameters where the power series
/// cancels catastrophically.
ScaledComplex hyp1f1_euler(cplx a, cplx b, cplx x);

/// Modified Bessel function I_nu(x), nu >= 0, x >= 0, by its ascending series.
double bessel_I(double order, double x);
/// exp(-x) I_nu(x); finite for arguments where bessel_I overflows.
double bessel_I_scaled(double order, double x);

/// Modified Bessel function K_nu(x), nu >= 0, x > 0, from
///   K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt
/// with the trapezoidal rule (geometrically convergent for this integrand).
double bessel_K(double order, double x);
/// exp(x) K_nu(x).
double bessel_K_scaled(double order, double x);

/// K_nu via (pi/2)(I_{-nu} - I_nu)/sin(nu pi); integer orders use symmetric
/// order offsets with Richardson extrapolation. Roughly 1e-9 relative for
/// x <= 5 and useless beyond x ~ 15 because of cancellation; kept as an
/// independent route for cross-checks.
double bessel_K_reflection(double order, double x);

/// I_nu(x) for any real order (negative orders included), ascending series.
double bessel_I_any_order(double order, double x);

/// ln[Gamma(n + offset) / Gamma(offset)] = sum_{k<n} ln(offset + k).
double ln_gamma_ratio(int n, double offset);

/// 1 / Gamma(x) for real x, zero at the poles of Gamma.
double rgamma(double x);

/// Generalized binomial coefficient y (y-1) ... (y-k+1) / k!.
template <typename Scalar>
Scalar binomial(Scalar y, int k) {
  Scalar out{1};
  for (int i = 0; i < k; ++i) out *= (y - Scalar(i)) / Scalar(i + 1);
  return out;
}

/// Jacobi polynomial from its explicit finite sum; valid for any a, b.
template <typename Scalar>
Scalar jacobi_P_explicit(int n, Scalar a, Scalar b, Scalar x) {
  const Scalar lo = (x - Scalar(1)) / Scalar(2);
  const Scalar hi = (x + Scalar(1)) / Scalar(2);
  Scalar sum{0};
  for (int s = 0; s <= n; ++s) {
    sum += binomial(Scalar(n) + a, n - s) * binomial(Scalar(n) + b, s) * std::pow(lo, s) *
           std::pow(hi, n - s);
  }
  return sum;
}

/// Jacobi polynomial P_n^{(a,b)}(x) by the three-term recurrence in the
/// degree. Parameters may be arbitrary (negative, complex); if a recurrence
/// denominator vanishes the explicit sum is used instead.
template <typename Scalar>
Scalar jacobi_P(int n, Scalar a, Scalar b, Scalar x) {
  if (n < 0) throw DomainViolation("jacobi_P: negative degree");
  if (n == 0) return Scalar(1);
  const Scalar one(1), two(2);
  Scalar prev = one;
  Scalar cur = (a + one) + (a + b + two) * (x - one) / two;
  const Scalar ab = a + b;
  for (int k = 2; k <= n; ++k) {
    const Scalar kk(k);
    const Scalar c1 = two * kk * (kk + ab) * (two * kk + ab - two);
    if (c1 == Scalar(0)) return jacobi_P_explicit(n, a, b, x);
    const Scalar c2 = (two * kk + ab - one) * ((two * kk + ab) * (two * kk + ab - two) * x + a * a - b * b);
    const Scalar c3 = two * (kk + a - one) * (kk + b - one) * (two * kk + ab);
    const Scalar next = (c2 * cur - c3 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return cur;
}

template <typename Scalar>
using SeriesCoeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Taylor coefficients of (1 + w t)^exponent up to t^nmax.
template <typename Scalar>
SeriesCoeffs<Scalar> binomial_series(Scalar exponent, Scalar w, int nmax) {
  SeriesCoeffs<Scalar> out(nmax + 1);
  Scalar c{1};
  for (int k = 0; k <= nmax; ++k) {
    out(k) = c;
    c *= (exponent - Scalar(k)) / Scalar(k + 1) * w;
  }
  return out;
}

/// Taylor coefficients of exp(c t) up to t^nmax.
template <typename Scalar>
SeriesCoeffs<Scalar> exp_series(Scalar c, int nmax) {
  SeriesCoeffs<Scalar> out(nmax + 1);
  Scalar term{1};
  for (int k = 0; k <= nmax; ++k) {
    out(k) = term;
    term *= c / Scalar(k + 1);
  }
  return out;
}

/// Cauchy product of two truncated power series, truncated to the shorter.
template <typename Scalar>
SeriesCoeffs<Scalar> series_product(const SeriesCoeffs<Scalar>& lhs, const SeriesCoeffs<Scalar>& rhs) {
  const Eigen::Index n = std::min(lhs.size(), rhs.size());
  SeriesCoeffs<Scalar> out = SeriesCoeffs<Scalar>::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; i + j < n; ++j) out(i + j) += lhs(i) * rhs(j);
  return out;
}

}  // namespace gencs

#endif  // GENCS_SPECFUN_HPP
