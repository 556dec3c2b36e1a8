#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gencs/errors.hpp"
#include "gencs/spectrum.hpp"

using namespace gencs;

TEST_CASE("energies") {
  const SpectrumModel well = SpectrumModel::infinite_well();
  CHECK(well.energy(0) == 0.0);
  CHECK(well.energy(2) == 8.0);
  CHECK(SpectrumModel::harmonic().energy(7) == 7.0);
  const SpectrumModel x4 = SpectrumModel::anharmonic(0.4);
  CHECK(std::abs(x4.energy(3) - (3.0 + 0.6 * 12.0)) < 1e-14);
  // eps = 2/3 reproduces n(n + 2) exactly.
  const SpectrumModel x4w = SpectrumModel::anharmonic(2.0 / 3.0);
  CHECK(x4w.energy(5) == 35.0);
  for (int n = 0; n <= 500; ++n) CHECK(x4w.energy(n) == well.energy(n));
  CHECK_THROWS_AS(SpectrumModel::anharmonic(0.0), DomainViolation);
  CHECK_THROWS_AS(SpectrumModel::anharmonic(-0.1), DomainViolation);
  CHECK_THROWS_AS(SpectrumModel::harmonic().kappa(), DomainViolation);
}

TEST_CASE("spectrum parameters") {
  const SpectrumModel well = SpectrumModel::infinite_well();
  CHECK(well.bargmann() == 3.0);
  CHECK(well.kappa() == 1.0);
  const SpectrumModel x4 = SpectrumModel::anharmonic(0.4);
  CHECK(std::abs(x4.bargmann() - 11.0 / 3.0) < 1e-15);
  CHECK(std::abs(x4.c0() - (0.3 - 21.0 * 0.16 / 8.0)) < 1e-15);
  CHECK(well.same_spectrum(well.with_alpha(2.0)));
  CHECK_FALSE(well.same_spectrum(x4));
}

TEST_CASE("E(n) products") {
  const SpectrumModel well = SpectrumModel::infinite_well();
  CHECK(log_e_product(well, 0) == 0.0);
  CHECK(std::abs(std::exp(log_e_product(well, 3)) - 360.0) < 1e-11);
  for (const SpectrumModel& m : {well, SpectrumModel::anharmonic(0.4), SpectrumModel::harmonic()})
    for (int n : {1, 4, 30, 200}) {
      CAPTURE(m.name());
      CAPTURE(n);
      CHECK(std::abs(log_e_product(m, n) - log_e_product_closed(m, n)) < 1e-12 * std::max(1.0, log_e_product(m, n)));
    }
}

TEST_CASE("ladder matrix elements") {
  const SpectrumModel well = SpectrumModel::infinite_well(0.5);
  const LadderElement down = ladder_minus(well, 1);
  CHECK(std::abs(down.magnitude - std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(down.phase - 1.5) < 1e-15);
  CHECK(ladder_minus(well, 0).magnitude == 0.0);
  const SpectrumModel x4 = SpectrumModel::anharmonic(0.4);
  CHECK(std::abs(ladder_plus(x4, 2).magnitude - std::sqrt(0.6 * 3.0 * (4.0 + 5.0 / 3.0))) < 1e-14);
  CHECK(g_eigenvalue(SpectrumModel::infinite_well(), 0) == 3.0);
  CHECK(std::abs(g_eigenvalue(x4, 2) - 4.6) < 1e-14);
}

TEST_CASE("A- A+ acts as e_{n+1} on basis states") {
  for (const SpectrumModel& m : {SpectrumModel::infinite_well(0.3), SpectrumModel::anharmonic(0.4, 1.1)}) {
    for (int n = 0; n <= 5; ++n) {
      const TruncatedState up = apply_creation(basis_state(m, n, 8));
      const TruncatedState back = apply_annihilation(up);
      CHECK(std::abs(back.coeffs(n) - m.energy(n + 1)) < 1e-12 * m.energy(n + 1));
      CHECK(std::abs(back.coeffs.norm() - m.energy(n + 1)) < 1e-12 * m.energy(n + 1));
    }
  }
}

TEST_CASE("creation spill at the window edge") {
  const SpectrumModel well = SpectrumModel::infinite_well();
  const TruncatedState up = apply_creation(basis_state(well, 4, 4));
  CHECK(up.coeffs.norm() == 0.0);
  CHECK(std::abs(up.spill - well.energy(5)) < 1e-12);
}

TEST_CASE("phase_angle stays accurate for large energies") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha_dist(0.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const double alpha = alpha_dist(rng);
    const double e = static_cast<double>(k * (k + 2));
    const double got = phase_angle(0.25, alpha, e);
    CHECK(got >= -std::numbers::pi - 1e-12);
    CHECK(got <= std::numbers::pi + 1e-12);
    // Compare through the unit circle with an extended-precision reference.
    const long double ref = 0.25L - static_cast<long double>(alpha) * e;
    CHECK(std::abs(std::polar(1.0, got) - std::complex<double>(std::cos(static_cast<double>(std::remainder(ref, 2 * std::numbers::pi_v<long double>))),
                                                              std::sin(static_cast<double>(std::remainder(ref, 2 * std::numbers::pi_v<long double>)))))
          < 1e-14);
  }
}

TEST_CASE("radius estimate grows for su(1,1) spectra") {
  const SpectrumModel well = SpectrumModel::infinite_well();
  CHECK(radius_estimate(well, 40) > radius_estimate(well, 20));
}

TEST_CASE("global phase fixing") {
  Eigen::VectorXcd v(3);
  v << std::complex<double>(0.0, 0.0), std::complex<double>(0.0, 2.0), std::complex<double>(1.0, 1.0);
  fix_global_phase(v);
  CHECK(v(1).imag() == doctest::Approx(0.0));
  CHECK(v(1).real() == doctest::Approx(2.0));
}
