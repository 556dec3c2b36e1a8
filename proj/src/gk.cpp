#include "gencs/gk.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "gencs/errors.hpp"
#include "gencs/specfun.hpp"

namespace gencs {

namespace {

// log(r^{2n} / E(n)) for n = 0, 1, ... until the terms are negligible against
// the accumulated sum.
struct GkLogTerms {
  std::vector<double> log_terms;
  double log_total = 0.0;  // log of the full sum
};

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

GkLogTerms gk_log_terms(const SpectrumModel& model, double r, int min_terms) {
  GkLogTerms out;
  if (r == 0.0) {
    out.log_terms.assign(std::max(min_terms, 1), -std::numeric_limits<double>::infinity());
    out.log_terms[0] = 0.0;
    return out;
  }
  const double log_r2 = 2.0 * std::log(r);
  double log_e = 0.0;
  double total = -std::numeric_limits<double>::infinity();
  double prev = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < 1'000'000; ++n) {
    if (n > 0) log_e += std::log(model.energy(n));
    const double lt = n * log_r2 - log_e;
    out.log_terms.push_back(lt);
    total = log_add(total, lt);
    const bool falling = lt < prev;
    prev = lt;
    if (n + 1 >= min_terms && falling && lt < total - 92.0) {
      out.log_total = total;
      return out;
    }
  }
  throw NonConvergent("gk normalization series did not converge");
}

}  // namespace

double gk_normalization(const SpectrumModel& model, double r) {
  if (!(r >= 0.0)) throw DomainViolation("gk_normalization: needs r >= 0");
  if (model.is_harmonic()) return std::exp(-0.5 * r * r);
  const double kappa = model.kappa();
  const cplx f = hyp0f1(model.bargmann(), kappa * r * r);
  return 1.0 / std::sqrt(f.real());
}

double gk_normalization_series(const SpectrumModel& model, double r) {
  if (!(r >= 0.0)) throw DomainViolation("gk_normalization: needs r >= 0");
  return std::exp(-0.5 * gk_log_terms(model, r, 1).log_total);
}

GkState build_gk(const SpectrumModel& model, std::complex<double> z, int truncation, double tail_tolerance) {
  const double r = std::abs(z);
  const GkLogTerms terms = gk_log_terms(model, r, truncation > 0 ? truncation + 1 : 1);
  const double log_norm = -0.5 * terms.log_total;

  int n_max = truncation;
  if (truncation <= 0) {
    // Smallest N with term(N) < 1e-20 * sum_{n<=N} term(n).
    double running = -std::numeric_limits<double>::infinity();
    n_max = r == 0.0 ? 0 : -1;
    const double log_cut = std::log(1e-20);
    for (std::size_t n = 0; n_max < 0 && n < terms.log_terms.size(); ++n) {
      running = log_add(running, terms.log_terms[n]);
      if (n > 0 && terms.log_terms[n] < running + log_cut && terms.log_terms[n] < terms.log_terms[n - 1]) {
        n_max = static_cast<int>(n);
        break;
      }
    }
    if (n_max < 0 || n_max > kGkTruncationCap)
      throw TruncationInsufficient("build_gk: adaptive truncation exceeds the cap of 2000");
  }

  double tail = 0.0;
  for (std::size_t n = n_max + 1; n < terms.log_terms.size(); ++n)
    tail += std::exp(2.0 * log_norm + terms.log_terms[n]);
  if (tail > tail_tolerance) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "build_gk: dropped norm^2 %.3e exceeds %.3g at N=%d", tail, tail_tolerance, n_max);
    throw TruncationInsufficient(buf);
  }

  const double arg = std::arg(z);
  const double alpha = model.alpha();
  Eigen::VectorXcd c(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double mag = std::exp(log_norm + 0.5 * terms.log_terms[n]);
    c(n) = std::polar(mag, phase_angle(n * arg, alpha, model.energy(n)));
  }
  return GkState{z, alpha, TruncatedState{std::move(c), model, tail}, std::exp(log_norm)};
}

Eigen::VectorXcd gk_coefficients(const SpectrumModel& model, std::complex<double> z, int truncation) {
  const double r = std::abs(z);
  const GkLogTerms terms = gk_log_terms(model, r, truncation + 1);
  const double log_norm = -0.5 * terms.log_total;
  Eigen::VectorXcd c(truncation + 1);
  for (int n = 0; n <= truncation; ++n)
    c(n) = std::polar(std::exp(log_norm + 0.5 * terms.log_terms[n]), phase_angle(n * std::arg(z), model.alpha(), model.energy(n)));
  return c;
}

std::complex<double> gk_overlap(const GkState& s1, const GkState& s2) {
  if (!s1.body.model.same_spectrum(s2.body.model)) throw ModelMismatch("gk_overlap: different spectra");
  const Eigen::Index n = std::min(s1.body.coeffs.size(), s2.body.coeffs.size());
  return s1.body.coeffs.head(n).dot(s2.body.coeffs.head(n));
}

std::complex<double> gk_overlap_closed(const GkState& s1, const GkState& s2) {
  const SpectrumModel& model = s1.body.model;
  if (!model.same_spectrum(s2.body.model)) throw ModelMismatch("gk_overlap: different spectra");
  if (s1.alpha != s2.alpha) throw ModelMismatch("gk_overlap_closed: needs equal alpha");
  const cplx x = std::conj(s1.z) * s2.z;
  const cplx kernel = model.is_harmonic() ? std::exp(x) : hyp0f1(model.bargmann(), model.kappa() * x);
  return kernel * gk_normalization(model, std::abs(s1.z)) * gk_normalization(model, std::abs(s2.z));
}

TruncatedState evolve(const TruncatedState& state, double t) {
  TruncatedState out = state;
  out.model = state.model.with_alpha(state.model.alpha() + t);
  for (Eigen::Index n = 0; n < out.coeffs.size(); ++n)
    out.coeffs(n) *= std::polar(1.0, phase_angle(0.0, t, state.model.energy(static_cast<int>(n))));
  return out;
}

GkState evolve(const GkState& state, double t) {
  GkState out = state;
  out.alpha = state.alpha + t;
  out.body = evolve(state.body, t);
  return out;
}

double mean_energy(const TruncatedState& state) {
  double sum = 0.0;
  for (Eigen::Index n = 0; n < state.coeffs.size(); ++n)
    sum += state.model.energy(static_cast<int>(n)) * std::norm(state.coeffs(n));
  return sum;
}

}  // namespace gencs
