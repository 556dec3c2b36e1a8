#include "gencs/specfun.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>

#include "gencs/quadrature.hpp"

namespace gencs {

namespace {

bool is_nonpositive_integer(cplx v, long* index) {
  if (v.imag() != 0.0 || v.real() > 0.0) return false;
  const double r = std::round(v.real());
  if (r != v.real()) return false;
  *index = static_cast<long>(-r);
  return true;
}

}  // namespace

SeriesResult hyp_pFq(std::span<const cplx> numer, std::span<const cplx> denom, cplx x, double tol) {
  const std::size_t p = numer.size();
  const std::size_t q = denom.size();
  if (p > q + 1) throw DomainViolation("hyp_pFq: p > q + 1 gives a divergent series");

  long terminate_at = std::numeric_limits<long>::max();
  for (const cplx& a : numer) {
    long m = 0;
    if (is_nonpositive_integer(a, &m)) terminate_at = std::min(terminate_at, m);
  }
  for (const cplx& b : denom) {
    long m = 0;
    if (is_nonpositive_integer(b, &m) && m < terminate_at)
      throw DenominatorPole("hyp_pFq: denominator parameter is a nonpositive integer");
  }
  const bool terminating = terminate_at != std::numeric_limits<long>::max();
  if (p == q + 1 && !terminating && std::abs(x) >= 1.0)
    throw NonConvergent("hyp_pFq: |x| >= 1 outside the disk of convergence");

  cplx sum{1.0, 0.0};
  cplx term{1.0, 0.0};
  int small_run = 0;
  double prev_mag = 1.0;
  for (int k = 0; k < kSeriesTermCap; ++k) {
    if (terminating && k == terminate_at) return {sum, k + 1, 0.0};
    cplx ratio = x / static_cast<double>(k + 1);
    for (const cplx& a : numer) ratio *= a + static_cast<double>(k);
    for (const cplx& b : denom) ratio /= b + static_cast<double>(k);
    term *= ratio;
    sum += term;
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
      throw NonConvergent("hyp_pFq: partial sum is not finite");
    const double mag = std::abs(term);
    if (mag <= tol * std::abs(sum) && mag <= prev_mag) {
      if (++small_run >= 3) return {sum, k + 2, mag};
    } else {
      small_run = 0;
    }
    if (mag == 0.0) return {sum, k + 2, 0.0};
    prev_mag = mag;
  }
  throw NonConvergent("hyp_pFq: term cap reached before convergence");
}

cplx hyp0f1(cplx b, cplx x, double tol) {
  const std::array<cplx, 1> denom{b};
  return hyp_pFq({}, denom, x, tol).value;
}

cplx hyp1f1(cplx a, cplx b, cplx x, double tol) {
  const std::array<cplx, 1> numer{a};
  const std::array<cplx, 1> denom{b};
  return hyp_pFq(numer, denom, x, tol).value;
}

namespace {

// Log of the modulus of the Euler integrand, with the linear coefficient `slope`.
struct EulerProfile {
  double slope, pa, pb;  // slope * t + pa ln t + pb ln(1 - t)
  double operator()(double t) const { return slope * t + pa * std::log(t) + pb * std::log1p(-t); }
  double derivative(double t) const { return slope + pa / t - pb / (1.0 - t); }
};

double argmax_profile(const EulerProfile& f) {
  // f is concave on (0, 1) when pa, pb >= 0; bisection on the derivative.
  double lo = 0.0, hi = 1.0;
  if (f.pa == 0.0 && f.derivative(1e-300) < 0.0) return 0.0;
  if (f.pb == 0.0 && f.derivative(1.0 - 1e-16) > 0.0) return 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f.derivative(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Edge of the region where f stays within `drop` of its peak value.
double window_edge(const EulerProfile& f, double peak_t, double peak, double drop, double boundary) {
  auto inside = [&](double t) { return t > 0.0 && t < 1.0 && f(t) > peak - drop; };
  if (inside(boundary)) return boundary;
  double a = peak_t, b = boundary;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (a + b);
    if (inside(mid)) a = mid; else b = mid;
  }
  return b;
}

// Scaled integral of exp(slope t) t^{a-1} (1-t)^{b-a-1} on [0, 1].
ScaledComplex euler_integral(cplx a, cplx b, cplx slope) {
  const EulerProfile prof{slope.real(), a.real() - 1.0, (b - a).real() - 1.0};
  const double t_star = argmax_profile(prof);
  const double t_eval = std::clamp(t_star, 1e-300, 1.0 - 1e-16);
  const double peak = prof(t_eval);
  constexpr double kDrop = 60.0;
  double lo = window_edge(prof, t_eval, peak, kDrop, 0.0);
  double hi = window_edge(prof, t_eval, peak, kDrop, 1.0);
  // An edge close to 0 or 1 on the scale of the window sits inside the
  // endpoint's algebraic layer; the graded pieces below then take over.
  if (lo < 0.01 * (hi - lo)) lo = 0.0;
  if (1.0 - hi < 0.01 * (hi - lo)) hi = 1.0;

  const GaussRule& rule = gauss_legendre(32);
  auto integrand = [&](double t) -> cplx {
    if (t <= 0.0 || t >= 1.0) return {0.0, 0.0};
    const cplx lg = slope * t + (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(-t);
    return std::exp(lg - peak);
  };
  // Pieces graded geometrically toward an endpoint of [0, 1] that the window
  // reaches, where t^{a-1} or (1-t)^{b-a-1} is not smooth.
  std::vector<std::pair<double, double>> pieces;
  const double mid = 0.5 * (lo + hi);
  constexpr int kLevels = 60;
  if (lo == 0.0) {
    for (int k = kLevels - 1; k >= 0; --k) pieces.emplace_back(std::ldexp(mid, -k - 1), std::ldexp(mid, -k));
  } else {
    pieces.emplace_back(lo, mid);
  }
  if (hi == 1.0) {
    const double w = 1.0 - mid;
    for (int k = 0; k < kLevels; ++k) pieces.emplace_back(1.0 - std::ldexp(w, -k), 1.0 - std::ldexp(w, -k - 1));
  } else {
    pieces.emplace_back(mid, hi);
  }
  auto total = [&](int panels) {
    cplx sum{0.0, 0.0};
    for (const auto& [x0, x1] : pieces) sum += integrate_panels(rule, x0, x1, panels, integrand);
    return sum;
  };
  cplx prev = total(1);
  for (int panels = 2; panels <= 512; panels *= 2) {
    const cplx cur = total(panels);
    if (std::abs(cur - prev) <= 1e-15 * std::abs(cur)) return {cur, peak};
    prev = cur;
  }
  throw QuadratureNonConvergent("hyp1f1_euler: panel refinement did not settle");
}

}  // namespace

ScaledComplex hyp1f1_euler(cplx a, cplx b, cplx x) {
  if (a.real() < 1.0 || (b - a).real() < 1.0)
    throw DomainViolation("hyp1f1_euler: needs Re a >= 1 and Re(b - a) >= 1");
  const ScaledComplex num = euler_integral(a, b, x);
  const ScaledComplex den = euler_integral(a, b, cplx{0.0, 0.0});
  return {num.mantissa / den.mantissa, num.log_scale - den.log_scale};
}

double rgamma(double x) {
  if (x <= 0.0 && std::round(x) == x) return 0.0;
  if (x > 171.0) return std::exp(-std::lgamma(x));
  return 1.0 / std::tgamma(x);
}

double ln_gamma_ratio(int n, double offset) {
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += std::log(offset + k);
  return sum;
}

namespace {

// ln I_nu(x) for nu >= 0, x > 0. The series has positive terms, so summing
// with periodic rescaling gives full relative accuracy.
double log_bessel_I(double order, double x) {
  const double half = 0.5 * x;
  const double q = half * half;
  const double log_first = order * std::log(half) - std::lgamma(order + 1.0);
  double sum = 1.0, term = 1.0, log_scale = 0.0;
  constexpr double kRescale = 1e280;
  for (int k = 0; k < 1'000'000; ++k) {
    term *= q / ((k + 1.0) * (k + 1.0 + order));
    sum += term;
    if (sum > kRescale) {
      sum /= kRescale;
      term /= kRescale;
      log_scale += std::log(kRescale);
    }
    if (term < 1e-17 * sum && k + 1.0 > half) return log_first + log_scale + std::log(sum);
  }
  throw NonConvergent("bessel_I: series did not converge");
}

void check_order(double order, double x, const char* who) {
  if (!(order >= 0.0) || !(x >= 0.0) || !std::isfinite(order) || !std::isfinite(x))
    throw DomainViolation(std::string(who) + ": needs order >= 0 and x >= 0");
}

}  // namespace

double bessel_I(double order, double x) {
  check_order(order, x, "bessel_I");
  if (x == 0.0) return order == 0.0 ? 1.0 : 0.0;
  const double v = std::exp(log_bessel_I(order, x));
  if (!std::isfinite(v)) throw Overflow("bessel_I: result exceeds the double range");
  return v;
}

double bessel_I_scaled(double order, double x) {
  check_order(order, x, "bessel_I_scaled");
  if (x == 0.0) return order == 0.0 ? 1.0 : 0.0;
  return std::exp(log_bessel_I(order, x) - x);
}

double bessel_I_any_order(double order, double x) {
  if (!(x >= 0.0)) throw DomainViolation("bessel_I_any_order: needs x >= 0");
  if (x == 0.0) return order == 0.0 ? 1.0 : (order > 0.0 || std::round(order) == order ? 0.0
                                                                                          : std::numeric_limits<double>::infinity());
  const double half = 0.5 * x;
  const double q = half * half;
  double sum = 0.0;
  double power = std::pow(half, order);
  double fact = 1.0;
  for (int k = 0; k < 10000; ++k) {
    const double term = power * rgamma(k + order + 1.0) / fact;
    sum += term;
    if (k > order + half + 2 && std::abs(term) < 1e-18 * std::abs(sum)) return sum;
    power *= q;
    fact *= k + 1.0;
  }
  throw NonConvergent("bessel_I_any_order: series did not converge");
}

namespace {

// ln[e^x K_nu(x)] by trapezoidal quadrature of the cosh integral.
double log_bessel_K_scaled(double order, double x) {
  auto exponent = [&](double t) {
    const double nt = order * t;
    // ln cosh(nu t) without overflow.
    const double lc = nt + std::log1p(std::exp(-2.0 * nt)) - std::numbers::ln2;
    // cosh(t) - 1 = 2 sinh^2(t/2)
    const double s = std::sinh(0.5 * t);
    return -x * 2.0 * s * s + lc;
  };
  const double t_peak = order > 0.0 ? std::asinh(order / x) : 0.0;
  const double shift = exponent(t_peak);

  auto trapezoid = [&](double h, double offset) {
    // Sum f(offset + k h) for k >= 0 until past the peak and negligible.
    double sum = 0.0;
    for (int k = 0; k < 1'000'000; ++k) {
      const double t = offset + k * h;
      const double f = std::exp(exponent(t) - shift);
      sum += f;
      if (t > t_peak && f < 1e-18 * sum) return sum;
    }
    throw NonConvergent("bessel_K: integrand tail did not decay");
  };

  double h = 0.25;
  // Half weight at t = 0.
  double sum = trapezoid(h, 0.0) - 0.5 * std::exp(exponent(0.0) - shift);
  double estimate = h * sum;
  for (int level = 0; level < 20; ++level) {
    sum += trapezoid(h, 0.5 * h);
    h *= 0.5;
    const double refined = h * sum;
    if (std::abs(refined - estimate) <= 1e-15 * refined) return std::log(refined) + shift;
    estimate = refined;
  }
  throw NonConvergent("bessel_K: trapezoid refinement did not settle");
}

}  // namespace

double bessel_K_scaled(double order, double x) {
  check_order(order, x, "bessel_K_scaled");
  if (x == 0.0) throw DomainViolation("bessel_K: K_nu is singular at x = 0");
  const double v = std::exp(log_bessel_K_scaled(order, x));
  if (!std::isfinite(v)) throw Overflow("bessel_K_scaled: result exceeds the double range");
  return v;
}

double bessel_K(double order, double x) {
  check_order(order, x, "bessel_K");
  if (x == 0.0) throw DomainViolation("bessel_K: K_nu is singular at x = 0");
  const double v = std::exp(log_bessel_K_scaled(order, x) - x);
  if (!std::isfinite(v)) throw Overflow("bessel_K: result exceeds the double range");
  if (v == 0.0) throw Overflow("bessel_K: result underflows the double range");
  return v;
}

double bessel_K_reflection(double order, double x) {
  check_order(order, x, "bessel_K_reflection");
  if (x == 0.0) throw DomainViolation("bessel_K: K_nu is singular at x = 0");
  auto direct = [x](double nu) {
    return 0.5 * std::numbers::pi * (bessel_I_any_order(-nu, x) - bessel_I_any_order(nu, x)) /
           std::sin(nu * std::numbers::pi);
  };
  if (std::abs(order - std::round(order)) > 1e-3) return direct(order);
  // Smooth in the order: average symmetric offsets, then eliminate the
  // O(delta^2) term.
  constexpr double kDelta = 2e-3;
  auto avg = [&](double d) { return 0.5 * (direct(order + d) + direct(order - d)); };
  const double coarse = avg(2.0 * kDelta);
  const double fine = avg(kDelta);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace gencs
