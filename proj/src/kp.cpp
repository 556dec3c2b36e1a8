#include "gencs/kp.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>
#include <vector>

#include "gencs/errors.hpp"
#include "gencs/gk.hpp"
#include "gencs/specfun.hpp"

namespace gencs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void require_su11(const SpectrumModel& model, const char* who) {
  if (model.is_harmonic())
    throw DomainViolation(std::string(who) + ": KP states of the harmonic spectrum coincide with GK states");
}

}  // namespace

PiTable::PiTable(const SpectrumModel& model, int m_max, int j_max, bool scaled)
    : m_max_{m_max}, j_max_{j_max}, scaled_{scaled} {
  if (m_max < 0 || j_max < 0) throw DomainViolation("PiTable: negative extent");
  const double factor = scaled ? model.kappa() : 1.0;
  const int rows = m_max + j_max + 1;
  Eigen::MatrixXd work = Eigen::MatrixXd::Constant(rows + 1, j_max + 1, kNegInf);
  work.col(0).setZero();
  std::vector<double> log_e(rows + 1, kNegInf);
  for (int m = 1; m <= rows; ++m) log_e[m] = std::log(factor * model.energy(m));
  for (int j = 1; j <= j_max; ++j)
    for (int m = 1; m <= rows - j; ++m) work(m, j) = log_add(work(m - 1, j), log_e[m] + work(m + 1, j - 1));
  log_ = work.topRows(m_max + 1);
}

double PiTable::value(int m, int j) const {
  const double v = std::exp(log_(m, j));
  if (!std::isfinite(v)) throw Overflow("PiTable: pi value exceeds the double range");
  return v;
}

double pi_value(const SpectrumModel& model, int m, int j, bool scaled) {
  if (m < 0 || j < 0) throw DomainViolation("pi_value: negative index");
  return PiTable(model, m, j, scaled).value(m, j);
}

namespace {

// Partial sum with `terms` terms; reports the last two magnitudes.
struct CnPartial {
  double sum;
  double last;
  double before_last;
};

CnPartial cn_partial(const SpectrumModel& model, int n, double r, int terms, bool scaled) {
  // q(m, j) = x^{2j} pi(m, j) / (m + 2j - 1)! obeys
  //   q(m, j) = (q(m-1, j) + x^2 e_m q(m+1, j-1)) / (m + 2j - 1),
  // which keeps every entry near the size of a series term. The alternating
  // sum cancels heavily as x grows, so the work is done in long double.
  using real = long double;
  const real x = scaled ? std::sqrt(static_cast<real>(model.scale())) * r : static_cast<real>(r);
  const real factor = scaled ? static_cast<real>(model.kappa()) : 1.0L;
  const int rows = n + terms + 1;
  std::vector<real> prev(rows + 1), cur(rows + 1);
  // j = 0: q(m, 0) = 1 / (m - 1)!, with q(0, 0) unused.
  prev[0] = 0.0L;
  prev[1] = 1.0L;
  for (int m = 2; m <= rows; ++m) prev[m] = prev[m - 1] / (m - 1);
  CnPartial out{0.0, 0.0, 0.0};
  real sum = prev[n + 1];
  out.last = static_cast<double>(prev[n + 1]);
  for (int j = 1; j < terms; ++j) {
    cur[0] = 0.0L;
    for (int m = 1; m <= rows - j; ++m)
      cur[m] = (cur[m - 1] + x * x * factor * static_cast<real>(model.energy(m)) * prev[m + 1]) / (m + 2 * j - 1);
    std::swap(prev, cur);
    const real mag = prev[n + 1];
    if (!std::isfinite(mag)) throw Overflow("cn_series: term exceeds the floating range");
    sum += (j % 2 == 0) ? mag : -mag;
    out.before_last = out.last;
    out.last = static_cast<double>(mag);
  }
  out.sum = static_cast<double>(sum);
  return out;
}

}  // namespace

double cn_series(const SpectrumModel& model, int n, double r, int terms, bool scaled) {
  if (n < 0 || !(r >= 0.0)) throw DomainViolation("cn_series: needs n >= 0 and r >= 0");
  if (scaled) require_su11(model, "cn_series");
  if (r == 0.0) return std::exp(-std::lgamma(n + 1.0));
  auto settled = [](const CnPartial& p) { return p.last <= 1e-17 * std::abs(p.sum) && p.last < p.before_last; };
  if (terms > 0) {
    const CnPartial p = cn_partial(model, n, r, terms, scaled);
    if (!settled(p)) throw NonConvergent("cn_series: tail not negligible at the requested term count");
    return p.sum;
  }
  double prev_last = std::numeric_limits<double>::infinity();
  for (int t = 16; t <= 2048; t *= 2) {
    const CnPartial p = cn_partial(model, n, r, t, scaled);
    if (settled(p)) return p.sum;
    if (p.last >= prev_last) throw NonConvergent("cn_series: terms grow; |Z| is outside the disk of convergence pi/2");
    prev_last = p.last;
  }
  throw NonConvergent("cn_series: series did not settle within 2048 terms");
}

double log_cn_closed(const SpectrumModel& model, int n, double r) {
  require_su11(model, "cn_closed");
  if (n < 0 || !(r >= 0.0)) throw DomainViolation("cn_closed: needs n >= 0 and r >= 0");
  const double big_r = std::sqrt(model.scale()) * r;
  const double b = model.bargmann();
  // log cosh R computed without overflow.
  const double log_cosh = big_r + std::log1p(std::exp(-2.0 * big_r)) - std::log(2.0);
  // log(sinh R / R), with the R -> 0 limit handled.
  const double log_sinhc = big_r < 1e-4 ? big_r * big_r / 6.0
                                        : big_r + std::log(-std::expm1(-2.0 * big_r)) - std::log(2.0 * big_r);
  return -(n + b) * log_cosh + n * log_sinhc - std::lgamma(n + 1.0);
}

double cn_closed(const SpectrumModel& model, int n, double r) { return std::exp(log_cn_closed(model, n, r)); }

std::complex<double> kp_zeta(const SpectrumModel& model, std::complex<double> z) {
  require_su11(model, "kp_zeta");
  const double root = std::sqrt(model.scale());
  const double big_r = root * std::abs(z);
  if (big_r == 0.0) return {0.0, 0.0};
  return z * (root * std::tanh(big_r) / big_r);
}

namespace {

struct DiskTerms {
  std::vector<double> log_mag;
  double tail;
};

// log |coefficient| of the disk form for n = 0..N (N adaptive when
// truncation <= 0), plus the norm squared beyond N.
DiskTerms disk_terms(const SpectrumModel& model, double abs_zeta, double log_one_minus, int truncation) {
  const double b = model.bargmann();
  DiskTerms out{{}, 0.0};
  if (abs_zeta == 0.0) {
    out.log_mag.assign(std::max(truncation, 1) + 1, kNegInf);
    out.log_mag[0] = 0.0;
    return out;
  }
  const double log_z = std::log(abs_zeta);
  const double z2 = abs_zeta * abs_zeta;
  double lm = 0.5 * b * log_one_minus;
  double running = kNegInf;
  // Consecutive ratio |c_n|^2 / |c_{n-1}|^2 = z2 (n + b - 1) / n, decreasing in n.
  auto falling = [&](int n) { return n > 0 && z2 * (n + b - 1.0) < n; };
  int n = 0;
  for (;; ++n) {
    if (n > 0) lm += log_z + 0.5 * std::log((b + n - 1.0) / n);
    out.log_mag.push_back(lm);
    running = log_add(running, 2.0 * lm);
    if (truncation > 0 ? n == truncation : falling(n) && 2.0 * lm < running + std::log(1e-20)) break;
    if (n >= kKpTruncationCap) throw TruncationInsufficient("build_kp: adaptive truncation exceeds the cap");
  }
  for (++n;; ++n) {
    lm += log_z + 0.5 * std::log((b + n - 1.0) / n);
    const double term = std::exp(2.0 * lm);
    out.tail += term;
    if (falling(n) && (term < 1e-6 * out.tail || term < 1e-40)) break;
  }
  return out;
}

KpState build_disk_state(const SpectrumModel& model, std::complex<double> z, std::complex<double> zeta,
                         double log_one_minus, int truncation, double tail_tolerance) {
  const DiskTerms terms = disk_terms(model, std::abs(zeta), log_one_minus, truncation);
  if (terms.tail > tail_tolerance) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "build_kp: dropped norm^2 %.3e exceeds %.3g at N=%zu", terms.tail,
                  tail_tolerance, terms.log_mag.size() - 1);
    throw TruncationInsufficient(buf);
  }
  const int n_max = static_cast<int>(terms.log_mag.size()) - 1;
  const double arg = std::arg(zeta);
  Eigen::VectorXcd c(n_max + 1);
  for (int n = 0; n <= n_max; ++n)
    c(n) = std::polar(std::exp(terms.log_mag[n]), phase_angle(n * arg, model.alpha(), model.energy(n)));
  return KpState{z, zeta, model.alpha(), TruncatedState{std::move(c), model, terms.tail}};
}

}  // namespace

KpState build_kp(const SpectrumModel& model, std::complex<double> z, int truncation, double tail_tolerance) {
  require_su11(model, "build_kp");
  const std::complex<double> zeta = kp_zeta(model, z);
  const double big_r = std::sqrt(model.scale()) * std::abs(z);
  // log(1 - tanh^2 R) = -2 log cosh R
  const double log_cosh = big_r + std::log1p(std::exp(-2.0 * big_r)) - std::log(2.0);
  return build_disk_state(model, z, zeta, -2.0 * log_cosh, truncation, tail_tolerance);
}

KpState build_kp_from_zeta(const SpectrumModel& model, std::complex<double> zeta, int truncation,
                           double tail_tolerance) {
  require_su11(model, "build_kp");
  const double a = std::abs(zeta);
  if (!(a < 1.0)) throw DomainViolation("build_kp: |zeta| must be below 1");
  const double big_r = std::atanh(a);
  const std::complex<double> z = a == 0.0 ? std::complex<double>{0.0, 0.0}
                                          : zeta * (big_r / a / std::sqrt(model.scale()));
  return build_disk_state(model, z, zeta, std::log1p(-a * a), truncation, tail_tolerance);
}

Eigen::VectorXcd kp_disk_coefficients(const SpectrumModel& model, std::complex<double> zeta, int truncation) {
  require_su11(model, "kp_disk_coefficients");
  const double a = std::abs(zeta);
  if (!(a < 1.0)) throw DomainViolation("kp_disk_coefficients: |zeta| must be below 1");
  const double b = model.bargmann();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(truncation + 1);
  double lm = 0.5 * b * std::log1p(-a * a);
  c(0) = std::exp(lm);
  if (a == 0.0) return c;
  for (int n = 1; n <= truncation; ++n) {
    lm += std::log(a) + 0.5 * std::log((b + n - 1.0) / n);
    c(n) = std::polar(std::exp(lm), phase_angle(n * std::arg(zeta), model.alpha(), model.energy(n)));
  }
  return c;
}

Eigen::VectorXcd kp_coeffs_exp_form(const SpectrumModel& model, std::complex<double> z, int truncation) {
  require_su11(model, "kp_coeffs_exp_form");
  const double r = std::abs(z);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(truncation + 1);
  c(0) = std::exp(log_cn_closed(model, 0, r));
  if (r == 0.0) return c;
  double log_e = 0.0;
  for (int n = 1; n <= truncation; ++n) {
    log_e += std::log(model.energy(n));
    const double lm = n * std::log(r) + log_cn_closed(model, n, r) + 0.5 * log_e;
    c(n) = std::polar(std::exp(lm), phase_angle(n * std::arg(z), model.alpha(), model.energy(n)));
  }
  return c;
}

KpState evolve(const KpState& state, double t) {
  KpState out = state;
  out.alpha = state.alpha + t;
  out.body = evolve(state.body, t);
  return out;
}

std::complex<double> kp_overlap(const KpState& s1, const KpState& s2) {
  if (!s1.body.model.same_spectrum(s2.body.model)) throw ModelMismatch("kp_overlap: different spectra");
  const Eigen::Index n = std::min(s1.body.coeffs.size(), s2.body.coeffs.size());
  return s1.body.coeffs.head(n).dot(s2.body.coeffs.head(n));
}

std::complex<double> kp_overlap_series(const KpState& s1, const KpState& s2) {
  const SpectrumModel& model = s1.body.model;
  if (!model.same_spectrum(s2.body.model)) throw ModelMismatch("kp_overlap: different spectra");
  const double b = model.bargmann();
  const std::complex<double> x = std::conj(s1.zeta) * s2.zeta;
  const double dalpha = s2.alpha - s1.alpha;
  std::complex<double> sum{0.0, 0.0};
  std::complex<double> power{1.0, 0.0};  // x^n (b)_n / n!
  for (int n = 0; n < 1'000'000; ++n) {
    const std::complex<double> term = power * std::polar(1.0, phase_angle(0.0, dalpha, model.energy(n)));
    sum += term;
    if (n > 8 && std::abs(term) < 1e-18 * std::abs(sum) && (n + b) * std::abs(x) < n + 1.0) break;
    power *= x * ((b + n) / (n + 1.0));
  }
  const double pre = std::pow((1.0 - std::norm(s1.zeta)) * (1.0 - std::norm(s2.zeta)), 0.5 * b);
  return pre * sum;
}

std::complex<double> kp_overlap_closed(const KpState& s1, const KpState& s2) {
  const SpectrumModel& model = s1.body.model;
  if (!model.same_spectrum(s2.body.model)) throw ModelMismatch("kp_overlap: different spectra");
  if (s1.alpha != s2.alpha) throw ModelMismatch("kp_overlap_closed: needs equal alpha");
  const double b = model.bargmann();
  const double pre = std::pow((1.0 - std::norm(s1.zeta)) * (1.0 - std::norm(s2.zeta)), 0.5 * b);
  return pre / std::pow(1.0 - std::conj(s1.zeta) * s2.zeta, b);
}

}  // namespace gencs
