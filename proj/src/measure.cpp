#include "gencs/measure.hpp"

#include <cmath>
#include <numbers>

#include "gencs/errors.hpp"
#include "gencs/gk.hpp"
#include "gencs/quadrature.hpp"
#include "gencs/specfun.hpp"

namespace gencs {

namespace {

double magnitude(double v) { return std::abs(v); }
template <typename Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().maxCoeff();
}

template <typename Value>
struct Accumulated {
  Value value;
  double error;
};

// Graded panels [2^{-k-1}, 2^{-k}] toward 0, k < levels, on [0, 1].
template <typename F>
auto graded_unit(F&& f, const QuadConfig& quad) {
  const GaussRule& lo = gauss_legendre(quad.nodes);
  const GaussRule& hi = gauss_legendre(2 * quad.nodes);
  auto coarse = integrate_panels(lo, 0.0, std::ldexp(1.0, -quad.graded_levels), 1, f);
  auto fine = integrate_panels(hi, 0.0, std::ldexp(1.0, -quad.graded_levels), 1, f);
  for (int k = quad.graded_levels - 1; k >= 0; --k) {
    const double a = std::ldexp(1.0, -k - 1);
    const double b = std::ldexp(1.0, -k);
    coarse += integrate_panels(lo, a, b, 1, f);
    fine += integrate_panels(hi, a, b, 1, f);
  }
  using Value = decltype(fine);
  return Accumulated<Value>{fine, magnitude(Value(fine - coarse))};
}

template <typename F>
auto graded_half_line(F&& f, const QuadConfig& quad) {
  auto acc = graded_unit(f, quad);
  const GaussRule& lo = gauss_legendre(quad.nodes);
  const GaussRule& hi = gauss_legendre(2 * quad.nodes);
  int quiet = 0;
  for (int k = 1; k < 100000; ++k) {
    const auto coarse = integrate_panels(lo, k, k + 1.0, 1, f);
    const auto fine = integrate_panels(hi, k, k + 1.0, 1, f);
    acc.value += fine;
    acc.error += magnitude(decltype(fine)(fine - coarse));
    if (magnitude(fine) <= 1e-19 * magnitude(acc.value)) {
      if (++quiet >= 3 && k >= 4) return acc;
    } else {
      quiet = 0;
    }
  }
  throw QuadratureNonConvergent("radial integrand does not decay");
}

}  // namespace

QuadResult integrate_half_line(const std::function<double(double)>& f, const QuadConfig& quad) {
  const auto acc = graded_half_line(f, quad);
  return {acc.value, acc.error};
}

QuadResult integrate_unit_graded(const std::function<double(double)>& f, const QuadConfig& quad) {
  const auto acc = graded_unit(f, quad);
  return {acc.value, acc.error};
}

double density(const MeasureSpec& spec, double r) {
  const SpectrumModel& model = spec.model;
  if (!(r >= 0.0)) throw DomainViolation("density: needs r >= 0");
  if (spec.family == MeasureFamily::KpDisk) {
    if (model.is_harmonic()) throw DomainViolation("density: no disk measure for the harmonic spectrum");
    if (!(r < 1.0)) throw DomainViolation("density: disk measure needs r < 1");
    const double one_minus = 1.0 - r * r;
    return (1.0 + model.kappa()) / std::numbers::pi / (one_minus * one_minus);
  }
  if (model.is_harmonic()) return 1.0 / std::numbers::pi;
  const double kappa = model.kappa();
  const double nu = 1.0 + kappa;
  const double mu = spec.kernel == PlaneKernel::MatchedOrder ? nu : 0.5 * nu;
  const double pre = 2.0 * kappa / std::numbers::pi;
  if (r == 0.0) return spec.kernel == PlaneKernel::MatchedOrder ? pre / (2.0 * nu) : 0.0;
  const double x = 2.0 * std::sqrt(kappa) * r;
  return pre * bessel_I_scaled(nu, x) * bessel_K_scaled(mu, x);
}

double plane_weight(const MeasureSpec& spec, double r) {
  if (spec.family != MeasureFamily::GkPlane) throw DomainViolation("plane_weight: needs the plane measure");
  const double nrm = gk_normalization(spec.model, r);
  return nrm * nrm * density(spec, r);
}

double measured_moment(const MeasureSpec& spec, int n, const QuadConfig& quad) {
  if (spec.family != MeasureFamily::GkPlane) throw DomainViolation("moment_check: needs the plane measure");
  if (n < 1) throw DomainViolation("moment_check: needs n >= 1");
  // int h(u) u^{n-1} du with u = r^2.
  auto f = [&](double r) { return 2.0 * r * plane_weight(spec, r) * std::pow(r, 2.0 * (n - 1)); };
  const auto acc = graded_half_line(f, quad);
  if (acc.error > 1e-9 * std::abs(acc.value))
    throw QuadratureNonConvergent("moment_check: node doubling changed the moment beyond 1e-9");
  return acc.value;
}

double moment_check(const MeasureSpec& spec, int n, const QuadConfig& quad) {
  const double target = std::exp(log_e_product(spec.model, n - 1)) / std::numbers::pi;
  return std::abs(measured_moment(spec, n, quad) - target) / target;
}

double identity_residual(const MeasureSpec& spec, int truncation, const QuadConfig& quad) {
  if (truncation < 0 || truncation > 40) throw DomainViolation("identity_residual: needs 0 <= N <= 40");
  const SpectrumModel& model = spec.model;
  Eigen::VectorXd diag;
  if (spec.family == MeasureFamily::GkPlane) {
    auto f = [&](double r) -> Eigen::VectorXd {
      const Eigen::VectorXcd c = gk_coefficients(model, r, truncation);
      return 2.0 * std::numbers::pi * r * density(spec, r) * c.cwiseAbs2();
    };
    const auto acc = graded_half_line(f, quad);
    diag = acc.value;
  } else {
    // u = 1 - r^2; r dr = du / 2.
    auto f = [&](double u) -> Eigen::VectorXd {
      const double r = std::sqrt(1.0 - u);
      const Eigen::VectorXcd c = kp_disk_coefficients(model, r, truncation);
      const double dens = (1.0 + model.kappa()) / std::numbers::pi / (u * u);
      const Eigen::VectorXd w = std::numbers::pi * dens * c.cwiseAbs2();
      if (!w.allFinite()) throw QuadratureNonConvergent("identity_residual: disk integrand is unbounded");
      return w;
    };
    diag = graded_unit(f, quad).value;
  }
  return (diag.array() - 1.0).abs().maxCoeff();
}

double reproduce_kernel_check(const MeasureSpec& spec, const KpState& target, int truncation, const QuadConfig& quad) {
  if (spec.family != MeasureFamily::KpDisk) throw DomainViolation("reproduce_kernel_check: needs the disk measure");
  const SpectrumModel model = spec.model.with_alpha(target.alpha);
  if (!model.same_spectrum(target.body.model)) throw ModelMismatch("reproduce_kernel_check: different spectra");
  const double b = model.bargmann();
  const double kappa = model.kappa();
  const std::complex<double> zt = target.zeta;
  const double target_pre = 0.5 * b * std::log1p(-std::norm(zt));
  const int angles = quad.angles;

  auto f = [&](double u) -> Eigen::VectorXcd {
    const double r = std::sqrt(1.0 - u);
    const double dens = (1.0 + kappa) / std::numbers::pi / (u * u);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(truncation + 1);
    for (int k = 0; k < angles; ++k) {
      const std::complex<double> zeta = std::polar(r, 2.0 * std::numbers::pi * k / angles);
      const Eigen::VectorXcd c = kp_disk_coefficients(model, zeta, truncation);
      // <zeta, alpha | target> with equal alpha, in closed form.
      const std::complex<double> kernel =
          std::exp(0.5 * b * std::log(u) + target_pre - b * std::log(1.0 - std::conj(zeta) * zt));
      acc += c * kernel;
    }
    // d mu = density r dr dphi = density du dphi / 2
    return acc * (0.5 * dens * 2.0 * std::numbers::pi / angles);
  };
  const Eigen::VectorXcd rebuilt = graded_unit(f, quad).value;
  const Eigen::Index n = std::min<Eigen::Index>(truncation + 1, target.body.coeffs.size());
  return (rebuilt.head(n) - target.body.coeffs.head(n)).cwiseAbs().maxCoeff();
}

}  // namespace gencs
