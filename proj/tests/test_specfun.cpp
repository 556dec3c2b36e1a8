#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "gencs/errors.hpp"
#include "gencs/quadrature.hpp"
#include "gencs/specfun.hpp"

using namespace gencs;
using cd = std::complex<double>;

namespace {

double rel(cd got, cd want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

// Reference values below were computed with mpmath at 40 digits.

TEST_CASE("terminating 1F1 sums the polynomial exactly") {
  CHECK(std::abs(hyp1f1(-2.0, 3.0, 1.0) - 5.0 / 12.0) < 1e-15);
  const std::array<cd, 1> a{cd{-2.0}};
  const std::array<cd, 1> b{cd{3.0}};
  const SeriesResult r = hyp_pFq(a, b, 1.0);
  CHECK(r.terms_used == 3);
  CHECK(r.tail_bound == 0.0);
}

TEST_CASE("Kummer transformation holds") {
  const cd a = 1.5, b = 3.0, x = 0.7;
  CHECK(rel(hyp1f1(a, b, x), std::exp(x) * hyp1f1(b - a, b, -x)) < 1e-14);
}

TEST_CASE("0F1 and 1F1 against reference values") {
  CHECK(rel(hyp0f1(3.0, 4.0), 3.2110946876420528) < 1e-14);
  CHECK(rel(hyp0f1(11.0 / 3.0, cd{-4.0, 1.0}), cd{0.26773696641940901, 0.10601413979342284}) < 1e-13);
  CHECK(rel(hyp1f1(cd{1.5, 0.3}, 3.0, cd{0.7, -0.4}), cd{1.4759480085397673, -0.22025615695382203}) < 1e-14);
}

TEST_CASE("Euler-integral 1F1 for large arguments") {
  CHECK(rel(hyp1f1_euler(2.2, 3.7, 60.0).value(), 9.0234126362713755e+23) < 1e-12);
  CHECK(rel(hyp1f1_euler(cd{2.5, 1.0}, 6.0, cd{40.0, -20.0}).value(), cd{-61507013906849.893, -18012007753693.644}) <
        1e-11);
  CHECK(rel(hyp1f1_euler(1.2, 4.5, -35.0).value(), 0.056221231675291941) < 1e-11);
  CHECK_THROWS_AS(hyp1f1_euler(0.5, 3.0, 10.0), DomainViolation);
}

TEST_CASE("series errors") {
  const std::array<cd, 1> a{cd{1.0}};
  const std::array<cd, 1> pole{cd{-2.0}};
  CHECK_THROWS_AS(hyp_pFq(a, pole, 0.5), DenominatorPole);
  const std::array<cd, 2> two{cd{1.0}, cd{1.5}};
  const std::array<cd, 1> one{cd{2.0}};
  CHECK_THROWS_AS(hyp_pFq(two, one, 1.5), NonConvergent);
  const std::array<cd, 3> three{cd{1.0}, cd{1.5}, cd{2.0}};
  CHECK_THROWS_AS(hyp_pFq(three, one, 0.1), DomainViolation);
  // A numerator zero ahead of the pole terminates the series first.
  const std::array<cd, 1> early{cd{-1.0}};
  CHECK(std::abs(hyp_pFq(early, pole, 0.5).value - 1.25) < 1e-15);
}

TEST_CASE("modified Bessel functions against reference values") {
  struct Case {
    double nu, x, i, k;
  };
  const Case cases[] = {
      {2.5, 3.0, 1.5153394466819651, 0.084060631974117383},
      {3.0, 0.5, 0.0026451119689902859, 62.057909529930256},
      {5.0 / 3.0, 40.0, 14380129910850948.0, 8.6856853121269032e-19},
      {0.0, 1.0, 1.2660658777520083, 0.42102443824070833},
      {8.0 / 3.0, 0.05, 1.3320831498052381e-5, 14072.82049716079},
  };
  for (const Case& c : cases) {
    CAPTURE(c.nu);
    CAPTURE(c.x);
    CHECK(std::abs(bessel_I(c.nu, c.x) / c.i - 1.0) < 1e-13);
    CHECK(std::abs(bessel_K(c.nu, c.x) / c.k - 1.0) < 1e-12);
    CHECK(std::abs(bessel_I_scaled(c.nu, c.x) / (c.i * std::exp(-c.x)) - 1.0) < 1e-13);
    CHECK(std::abs(bessel_K_scaled(c.nu, c.x) / (c.k * std::exp(c.x)) - 1.0) < 1e-12);
  }
  CHECK(std::abs(bessel_K(2.0, 1e-3) / 1999999.5000009717 - 1.0) < 1e-12);
}

TEST_CASE("K reflection route agrees with the integral route") {
  CHECK(std::abs(bessel_K_reflection(2.5, 3.0) / 0.084060631974117383 - 1.0) < 1e-10);
  CHECK(std::abs(bessel_K_reflection(2.0005, 1.7) / 0.41198560610850835 - 1.0) < 1e-7);
  CHECK(std::abs(bessel_K_reflection(2.0, 1.7) / bessel_K(2.0, 1.7) - 1.0) < 1e-7);
}

TEST_CASE("Bessel closed forms") {
  // I_nu(2x) = x^nu / Gamma(nu + 1) 0F1(; nu + 1; x^2)
  const double x = 1.3;
  CHECK(std::abs(bessel_I(2.0, 2.0 * x) / (x * x / 2.0 * hyp0f1(3.0, x * x).real()) - 1.0) < 1e-14);
  CHECK(std::abs(bessel_K(0.5, 2.0) / (std::sqrt(std::numbers::pi / 4.0) * std::exp(-2.0)) - 1.0) < 1e-14);
  CHECK(bessel_I(0.0, 0.0) == 1.0);
  CHECK(bessel_I(1.5, 0.0) == 0.0);
}

TEST_CASE("Gamma helpers") {
  CHECK(std::abs(ln_gamma_ratio(3, 5.0) - std::log(210.0)) < 1e-14);
  CHECK(rgamma(-3.0) == 0.0);
  CHECK(std::abs(rgamma(5.0) - 1.0 / 24.0) < 1e-17);
  // E(n) of the quartic spectrum: (3 eps / 2)^n n! Gamma(n + 2 + 2/(3 eps)) / Gamma(2 + 2/(3 eps)).
  const double eps = 0.4, s = 1.5 * eps;
  double product = 1.0;
  for (int m = 1; m <= 4; ++m) product *= m + s * (m * m + m);
  const double closed = std::exp(ln_gamma_ratio(4, 2.0 + 2.0 / (3.0 * eps))) * std::pow(s, 4) * 24.0;
  CHECK(std::abs(closed / product - 1.0) < 1e-13);
}

TEST_CASE("Jacobi polynomials") {
  const double a = 0.7, b = -1.9;
  CHECK(std::abs(jacobi_P(1, a, b, 0.0) - (a - b) / 2.0) < 1e-15);
  for (int n = 0; n <= 8; ++n) {
    CAPTURE(n);
    CHECK(std::abs(jacobi_P(n, a, b, 0.3) - jacobi_P_explicit(n, a, b, 0.3)) < 1e-12);
  }
  // Parameters where the leading recurrence coefficient vanishes.
  CHECK(std::abs(jacobi_P(3, -1.0, -2.0, 0.0) - jacobi_P_explicit(3, -1.0, -2.0, 0.0)) < 1e-13);
  // (2w)^n P_n^{(ap - n, am - n)}(0) is the Taylor coefficient of (1 + w x)^ap (1 - w x)^am.
  const cd w{0.4, 0.2}, ap{-1.2, 0.5}, am{-1.8, -0.5};
  const auto taylor = series_product<cd>(binomial_series<cd>(ap, w, 3), binomial_series<cd>(am, -w, 3));
  const cd jac = std::pow(2.0 * w, 3) * jacobi_P<cd>(3, ap - 3.0, am - 3.0, cd{0.0});
  CHECK(std::abs(jac - taylor(3)) < 1e-14);
}

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {2, 5, 24, 64}) {
    const GaussRule& g = gauss_legendre(n);
    CHECK(std::abs(g.weights.sum() - 2.0) < 1e-14);
    // Exact through degree 2n - 1.
    const int deg = 2 * n - 2;
    double q = 0.0;
    for (Eigen::Index i = 0; i < g.nodes.size(); ++i) q += g.weights(i) * std::pow(g.nodes(i), deg);
    CHECK(std::abs(q - 2.0 / (deg + 1)) < 1e-13);
  }
  CHECK(std::abs(integrate_panels(gauss_legendre(16), 0.0, 3.0, 4, [](double x) { return std::exp(-x); }) -
                 (1.0 - std::exp(-3.0))) < 1e-15);
}
