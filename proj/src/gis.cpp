#include "gencs/gis.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "gencs/errors.hpp"
#include "gencs/gk.hpp"
#include "gencs/quadrature.hpp"

namespace gencs {

void validate(const GisParams& params) {
  if (params.lambda == cplx{-1.0, 0.0})
    throw LambdaDegenerate("lambda = -1: the eigenvalue equation has no normalizable solution");
  if (!std::isfinite(params.lambda.real()) || !std::isfinite(params.lambda.imag()) ||
      !std::isfinite(params.z.real()) || !std::isfinite(params.z.imag()))
    throw DomainViolation("GIS parameters must be finite");
}

namespace {

constexpr double kRescale = 1e150;

// Forward recurrence for b_n (phases stripped). Rescales the whole prefix when
// it grows large; the overall constant is irrelevant after normalization.
class GisRecurrence {
 public:
  GisRecurrence(const SpectrumModel& model, const GisParams& params)
      : model_{model}, two_z_{2.0 * params.z}, plus_{1.0 + params.lambda}, minus_{1.0 - params.lambda} {
    b_.push_back(1.0);
  }

  void step() {
    const int n = last();
    const cplx prev = n > 0 ? b_[n - 1] : cplx{0.0, 0.0};
    const cplx next =
        (two_z_ * b_[n] - minus_ * std::sqrt(model_.energy(n)) * prev) / (plus_ * std::sqrt(model_.energy(n + 1)));
    b_.push_back(next);
    sum_ += std::norm(next);
    if (std::abs(next) > kRescale) {
      for (cplx& v : b_) v /= kRescale;
      sum_ /= kRescale * kRescale;
    }
  }

  const std::vector<cplx>& values() const { return b_; }
  int last() const { return static_cast<int>(b_.size()) - 1; }
  double sum() const { return sum_; }

 private:
  SpectrumModel model_;
  cplx two_z_, plus_, minus_;
  std::vector<cplx> b_;
  double sum_ = 1.0;
};

// Past the z-driven growth, and the last pair (weighted by the A+ spill factor)
// is negligible.
bool tail_negligible(const SpectrumModel& model, const std::vector<cplx>& b, double u_abs, double sum) {
  const int n = static_cast<int>(b.size()) - 1;
  if (n < 2) return false;
  const double grow = std::sqrt(model.energy(n + 1));
  if (grow < 2.0 * u_abs + 1.0) return false;
  const double pair = std::norm(b[n]) + std::norm(b[n - 1]);
  return model.energy(n + 1) * pair < 1e-24 * sum;
}

Eigen::VectorXcd with_phases(const SpectrumModel& model, const std::vector<cplx>& b, int n_max) {
  Eigen::VectorXcd out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) out(n) = b[n] * std::polar(1.0, phase_angle(0.0, model.alpha(), model.energy(n)));
  return out;
}

TruncatedState finish_state(const SpectrumModel& model, Eigen::VectorXcd coeffs, double spill_abs) {
  const double nrm2 = coeffs.squaredNorm();
  TruncatedState state{std::move(coeffs), model, spill_abs};
  state = state.normalized();
  state.spill = spill_abs / nrm2;
  fix_global_phase(state.coeffs);
  return state;
}

}  // namespace

Eigen::VectorXcd gis_recurrence_coefficients(const SpectrumModel& model, const GisParams& params, int truncation) {
  validate(params);
  if (truncation < 0) throw DomainViolation("gis_recurrence_coefficients: negative truncation");
  std::vector<cplx> raw;
  // Without rescaling so that a_0 stays exactly 1.
  raw.push_back(1.0);
  const cplx plus = 1.0 + params.lambda;
  const cplx minus = 1.0 - params.lambda;
  for (int n = 0; n < truncation; ++n) {
    const cplx prev = n > 0 ? raw[n - 1] : cplx{0.0, 0.0};
    raw.push_back((2.0 * params.z * raw[n] - minus * std::sqrt(model.energy(n)) * prev) /
                  (plus * std::sqrt(model.energy(n + 1))));
  }
  return with_phases(model, raw, truncation);
}

TruncatedState build_gis_recurrence(const SpectrumModel& model, const GisParams& params,
                                    const GisBuildOptions& options) {
  validate(params);
  const bool analytic = params.in_analytic_domain();
  if (!analytic && !(options.exploration && options.truncation > 0))
    throw NotNormalizable("Re(lambda) <= 0: the GIS coefficients do not decay (normalizable only for Re lambda > 0)");

  const double u_abs = std::abs(2.0 * params.z / (1.0 + params.lambda));
  GisRecurrence rec(model, params);
  int n_max = options.truncation;
  if (n_max <= 0) {
    while (!tail_negligible(model, rec.values(), u_abs, rec.sum())) {
      if (rec.last() >= kGisTruncationCap) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "build_gis: coefficients still significant at N=%d (|b_N|^2/sum = %.3e)",
                      rec.last(), std::norm(rec.values().back()) / rec.sum());
        throw NotNormalizable(buf);
      }
      rec.step();
    }
    n_max = rec.last();
  } else {
    while (rec.last() < n_max) rec.step();
  }
  Eigen::VectorXcd coeffs = with_phases(model, rec.values(), n_max);
  const double spill = model.energy(n_max + 1) * std::norm(coeffs(n_max));

  if (analytic) {
    // Norm squared beyond N, from continuing the recurrence.
    for (int extra = 0; extra < 4 * n_max + 200; ++extra) {
      rec.step();
      if (std::norm(rec.values().back()) < 1e-40 * rec.sum()) break;
    }
    double tail = 0.0;
    for (int n = n_max + 1; n <= rec.last(); ++n) tail += std::norm(rec.values()[n]);
    const double rel_tail = tail / rec.sum();
    if (rel_tail > options.tail_tolerance) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "build_gis: dropped norm^2 %.3e exceeds %.3g at N=%d", rel_tail,
                    options.tail_tolerance, n_max);
      throw TruncationInsufficient(buf);
    }
  }
  return finish_state(model, std::move(coeffs), spill);
}

TruncatedState build_gis(const SpectrumModel& model, const GisParams& params, const GisBuildOptions& options) {
  validate(params);
  if (params.lambda == cplx{1.0, 0.0}) return build_gk(model, params.z, options.truncation, options.tail_tolerance).body;
  return build_gis_recurrence(model, params, options);
}

double delta_nh(const SpectrumModel& model, int n, int h) {
  if (n < 0 || h < 0 || 2 * h > n) throw DomainViolation("delta_nh: needs 0 <= h <= n/2");
  std::vector<double> e(n + 1);
  for (int k = 0; k <= n; ++k) e[k] = model.energy(k);
  return delta_table(e, n)[n][h];
}

cplx gis_coeff_closed(const SpectrumModel& model, const GisParams& params, int n) {
  validate(params);
  if (n < 0) throw DomainViolation("gis_coeff_closed: negative level");
  const cplx u = 2.0 * params.z / (1.0 + params.lambda);
  const cplx v = (1.0 - params.lambda) / (1.0 + params.lambda);
  std::vector<double> e(n + 1);
  for (int k = 0; k <= n; ++k) e[k] = model.energy(k);
  const auto table = delta_table(e, n);
  cplx sum{0.0, 0.0};
  for (int h = 0; 2 * h <= n; ++h) sum += std::pow(-v, h) * std::pow(u, n - 2 * h) * table[n][h];
  return sum * std::exp(-0.5 * log_e_product(model, n)) * std::polar(1.0, phase_angle(0.0, model.alpha(), model.energy(n)));
}

UncertaintyReport observables(const TruncatedState& input, double spill_tolerance) {
  // A one-level window (the vacuum) gets an explicit zero at n = 1.
  TruncatedState padded = input;
  if (padded.truncation() < 1) {
    padded.coeffs.conservativeResize(2);
    padded.coeffs(1) = 0.0;
  }
  const TruncatedState& state = padded;
  const SpectrumModel& model = state.model;
  const int n_max = state.truncation();
  UncertaintyReport rep;
  rep.spill = model.energy(n_max + 1) * std::norm(state.coeffs(n_max));
  if (rep.spill > spill_tolerance) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "observables: A+ spill %.3e past N=%d exceeds %.3g", rep.spill, n_max,
                  spill_tolerance);
    throw SpillTooLarge(buf);
  }

  const int dim = n_max + 2;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi.head(n_max + 1) = state.coeffs;
  Eigen::VectorXcd am = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd ap = Eigen::VectorXcd::Zero(dim);
  for (int n = 0; n <= n_max; ++n) {
    am(n) = ladder_minus(model, n + 1).value() * psi(n + 1);
    ap(n + 1) = ladder_plus(model, n).value() * psi(n);
  }
  const double root2 = std::sqrt(2.0);
  const cplx i{0.0, 1.0};
  const Eigen::VectorXcd w_psi = (am + ap) / root2;
  const Eigen::VectorXcd p_psi = i * (ap - am) / root2;
  rep.mean_w = psi.dot(w_psi).real();
  rep.mean_p = psi.dot(p_psi).real();
  const Eigen::VectorXcd dw = w_psi - rep.mean_w * psi;
  const Eigen::VectorXcd dp = p_psi - rep.mean_p * psi;
  rep.var_w = dw.squaredNorm();
  rep.var_p = dp.squaredNorm();

  for (int n = 0; n <= n_max; ++n) rep.mean_g += model.gap(n) * std::norm(psi(n));

  const cplx mean_am = psi.dot(am);
  const cplx am2 = ap.dot(am);  // <psi| A- A- |psi> = <A+ psi | A- psi>
  rep.mean_f = 2.0 * (am2 - mean_am * mean_am).imag();
  rep.mean_f_crosscheck = std::abs(rep.mean_f - 2.0 * dw.dot(dp).real());

  rep.delta = 0.5 * std::hypot(rep.mean_g, rep.mean_f);
  rep.saturation_residual = rep.var_w * rep.var_p - 0.25 * (rep.mean_g * rep.mean_g + rep.mean_f * rep.mean_f);
  return rep;
}

namespace {

void require_analytic(const SpectrumModel& model, const GisParams& params) {
  validate(params);
  if (params.lambda == cplx{1.0, 0.0})
    throw LambdaDegenerate("lambda = 1: sqrt(lambda^2 - 1) vanishes; use the GK form");
  if (!params.in_analytic_domain())
    throw OutsideAnalyticDomain("Re(lambda) <= 0: no normalizable analytic solution");
  if (model.is_harmonic())
    throw DomainViolation("the harmonic spectrum has Gaussian GIS, not Kummer or disk solutions");
}

}  // namespace

AnalyticSolution analytic_gk_solution(const SpectrumModel& model, const GisParams& params) {
  require_analytic(model, params);
  const double kappa = model.kappa();
  const cplx b = model.bargmann();
  const cplx w = std::sqrt((params.lambda - 1.0) / (params.lambda + 1.0));
  const cplx c = std::sqrt(kappa) * w;
  const cplx a = 0.5 * b - kappa * params.z / (c * (1.0 + params.lambda));
  return AnalyticSolution{AnalyticKind::KummerPlane, a, b, c, {}, {}, w};
}

AnalyticSolution analytic_kp_solution(const SpectrumModel& model, const GisParams& params) {
  require_analytic(model, params);
  const cplx b = model.bargmann();
  const cplx w = std::sqrt((params.lambda - 1.0) / (params.lambda + 1.0));
  const cplx shift = std::sqrt(model.kappa()) * params.z / (w * (1.0 + params.lambda));
  return AnalyticSolution{AnalyticKind::DiskExponents, {}, b, {}, -0.5 * b + shift, -0.5 * b - shift, w};
}

cplx kummer_psi(const AnalyticSolution& sol, cplx x, KummerForm form) {
  if (sol.kind != AnalyticKind::KummerPlane) throw DomainViolation("kummer_psi: needs a Kummer solution");
  const cplx y = -2.0 * sol.c * x;
  bool upper = form == KummerForm::Upper;
  if (form == KummerForm::Auto) upper = y.real() >= 0.0;
  const cplx a = upper ? sol.a : sol.b - sol.a;
  const cplx arg = upper ? y : -y;
  const cplx pre = upper ? sol.c * x : -sol.c * x;
  if (std::abs(arg) > 30.0 && a.real() >= 1.0 && (sol.b - a).real() >= 1.0) {
    const ScaledComplex m = hyp1f1_euler(a, sol.b, arg);
    return m.mantissa * std::exp(pre + m.log_scale);
  }
  return std::exp(pre) * hyp1f1(a, sol.b, arg);
}

Eigen::VectorXcd kummer_taylor(const AnalyticSolution& sol, int nmax) {
  if (sol.kind != AnalyticKind::KummerPlane) throw DomainViolation("kummer_taylor: needs a Kummer solution");
  SeriesCoeffs<cplx> m(nmax + 1);
  cplx term{1.0, 0.0};
  const cplx y = -2.0 * sol.c;
  for (int k = 0; k <= nmax; ++k) {
    m(k) = term;
    term *= (sol.a + double(k)) / (sol.b + double(k)) * y / double(k + 1);
  }
  return series_product<cplx>(exp_series<cplx>(sol.c, nmax), m);
}

Eigen::VectorXcd gis_coeffs_from_kummer(const SpectrumModel& model, const AnalyticSolution& sol, int nmax) {
  Eigen::VectorXcd t = kummer_taylor(sol, nmax);
  for (int n = 0; n <= nmax; ++n)
    t(n) *= std::exp(0.5 * log_e_product(model, n)) * std::polar(1.0, phase_angle(0.0, model.alpha(), model.energy(n)));
  return t;
}

cplx disk_phi(const AnalyticSolution& sol, cplx zeta) {
  if (sol.kind != AnalyticKind::DiskExponents) throw DomainViolation("disk_phi: needs a disk solution");
  return std::pow(1.0 + sol.w * zeta, sol.alpha_plus) * std::pow(1.0 - sol.w * zeta, sol.alpha_minus);
}

Eigen::VectorXcd disk_jacobi_coefficients(const AnalyticSolution& sol, int nmax) {
  if (sol.kind != AnalyticKind::DiskExponents) throw DomainViolation("disk_jacobi_coefficients: needs a disk solution");
  Eigen::VectorXcd g(nmax + 1);
  cplx scale{1.0, 0.0};
  for (int n = 0; n <= nmax; ++n) {
    const cplx shift = double(n);
    g(n) = scale * jacobi_P<cplx>(n, sol.alpha_plus - shift, sol.alpha_minus - shift, cplx{0.0, 0.0});
    scale *= 2.0 * sol.w;
  }
  return g;
}

Eigen::VectorXcd disk_taylor_coefficients(const AnalyticSolution& sol, int nmax) {
  if (sol.kind != AnalyticKind::DiskExponents) throw DomainViolation("disk_taylor_coefficients: needs a disk solution");
  return series_product<cplx>(binomial_series<cplx>(sol.alpha_plus, sol.w, nmax),
                              binomial_series<cplx>(sol.alpha_minus, -sol.w, nmax));
}

TruncatedState gis_state_from_disk(const SpectrumModel& model, const GisParams& params, int truncation) {
  const AnalyticSolution sol = analytic_kp_solution(model, params);
  const double b = model.bargmann();
  const double u_abs = std::abs(2.0 * params.z / (1.0 + params.lambda));
  auto coefficients = [&](int nmax) {
    Eigen::VectorXcd g = disk_jacobi_coefficients(sol, nmax);
    double log_weight = 0.0;  // ln[(b)_n / n!]
    for (int n = 0; n <= nmax; ++n) {
      if (n > 0) log_weight += std::log((b + n - 1.0) / n);
      g(n) *= std::exp(-0.5 * log_weight) * std::polar(1.0, phase_angle(0.0, model.alpha(), model.energy(n)));
    }
    return g;
  };
  if (truncation > 0) {
    Eigen::VectorXcd c = coefficients(truncation);
    const double spill = model.energy(truncation + 1) * std::norm(c(truncation));
    return finish_state(model, std::move(c), spill);
  }
  for (int nmax = 32; nmax <= kGisTruncationCap; nmax *= 2) {
    Eigen::VectorXcd c = coefficients(nmax);
    std::vector<cplx> v(c.data(), c.data() + c.size());
    if (tail_negligible(model, v, u_abs, c.squaredNorm())) {
      const double spill = model.energy(nmax + 1) * std::norm(c(nmax));
      return finish_state(model, std::move(c), spill);
    }
  }
  throw NotNormalizable("gis_state_from_disk: coefficients still significant at the truncation cap");
}

cplx gis_plane_function(const SpectrumModel& model, const GisParams& params, cplx x) {
  validate(params);
  const cplx plus = 1.0 + params.lambda;
  const cplx minus = 1.0 - params.lambda;
  const cplx two_z = 2.0 * params.z;
  cplx prev{0.0, 0.0};
  cplx t{1.0, 0.0};
  cplx power{1.0, 0.0};
  cplx sum{1.0, 0.0};
  int quiet = 0;
  for (int n = 0; n < 100000; ++n) {
    const double e_next = model.energy(n + 1);
    const cplx next = (two_z * t - minus * prev) / (plus * e_next);
    prev = t;
    t = next;
    power *= x;
    const cplx term = t * power;
    sum += term;
    if (!std::isfinite(std::abs(sum))) throw Overflow("gis_plane_function: partial sums overflow");
    // Once e_n dominates |x|, |z| and |lambda|, the terms shrink monotonically.
    const bool dominated = e_next > 4.0 * (std::abs(two_z) + std::abs(minus)) * (1.0 + std::abs(x) * std::abs(x)) / std::abs(plus);
    quiet = dominated && std::abs(term) <= 1e-18 * std::abs(sum) ? quiet + 1 : 0;
    if (quiet >= 3) return sum;
  }
  throw NonConvergent("gis_plane_function: Taylor series did not settle");
}

cplx harmonic_gis_gaussian(const GisParams& params, cplx x) {
  validate(params);
  const cplx lam = params.lambda;
  return std::exp(2.0 * params.z * x / (1.0 + lam) + 0.5 * (lam - 1.0) / (lam + 1.0) * x * x);
}

double laplace_bridge_check(const SpectrumModel& model, const GisParams& params, double s, KummerForm form) {
  validate(params);
  if (model.is_harmonic()) throw DomainViolation("laplace_bridge_check: needs an su(1,1) spectrum");
  if (!(s > 0.0)) throw DomainViolation("laplace_bridge_check: needs s > 0");
  const double kappa = model.kappa();
  const double b = model.bargmann();
  const bool degenerate = params.lambda == cplx{1.0, 0.0};

  std::function<cplx(double)> psi;
  cplx phi;
  double growth = 0.0;
  if (degenerate) {
    psi = [&](double x) { return hyp0f1(b, kappa * params.z * x); };
    phi = std::exp(kappa * params.z * s);
  } else {
    const AnalyticSolution plane = analytic_gk_solution(model, params);
    const AnalyticSolution disk = analytic_kp_solution(model, params);
    psi = [plane, form](double x) { return kummer_psi(plane, x, form); };
    phi = disk_phi(disk, std::sqrt(kappa) * s);
    growth = std::abs(plane.c.real());
  }
  const double rate = 1.0 / s - growth;
  if (!(rate > 0.0)) throw DomainViolation("laplace_bridge_check: exp(-x/s) does not dominate the growth of Psi");

  // Integrand normalized by Gamma(b) s^b: a Gamma(b, s) density times Psi.
  const double log_norm = std::lgamma(b) + b * std::log(s);
  auto log_envelope = [&](double x) { return (b - 1.0) * std::log(x) - rate * x - log_norm; };
  double cut = std::max(1.0, 4.0 * b / rate);
  while (log_envelope(cut) + 2.0 * std::sqrt(kappa * std::abs(params.z) * cut) > std::log(1e-18)) cut *= 1.5;

  auto integrand = [&](double x) -> cplx {
    if (x <= 0.0) return {0.0, 0.0};
    return std::exp((b - 1.0) * std::log(x) - x / s - log_norm) * psi(x);
  };
  const GaussRule& rule = gauss_legendre(40);
  cplx prev = integrate_panels(rule, 0.0, cut, 5, integrand);
  for (int panels = 10; panels <= 2560; panels *= 2) {
    const cplx cur = integrate_panels(rule, 0.0, cut, panels, integrand);
    if (std::abs(cur - prev) <= 1e-9 * std::abs(cur)) return std::abs(cur - phi) / std::abs(phi);
    prev = cur;
  }
  throw QuadratureNonConvergent("laplace_bridge_check: panel refinement did not settle");
}

}  // namespace gencs
