#include "gencs/spectrum.hpp"

#include <cmath>
#include <cstdio>

#include "gencs/errors.hpp"
#include "gencs/specfun.hpp"

namespace gencs {

SpectrumModel::SpectrumModel(Family family, double epsilon, double alpha)
    : family_{family}, epsilon_{epsilon}, alpha_{alpha}, scale_{0.0} {
  switch (family) {
    case Family::Harmonic: scale_ = 0.0; break;
    case Family::InfiniteWell: scale_ = 1.0; break;
    case Family::AnharmonicX4: scale_ = 1.5 * epsilon; break;
  }
}

SpectrumModel SpectrumModel::harmonic(double alpha) { return {Family::Harmonic, 0.0, alpha}; }

SpectrumModel SpectrumModel::infinite_well(double alpha) { return {Family::InfiniteWell, 0.0, alpha}; }

SpectrumModel SpectrumModel::anharmonic(double epsilon, double alpha) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw DomainViolation("anharmonic spectrum needs epsilon > 0");
  return {Family::AnharmonicX4, epsilon, alpha};
}

SpectrumModel SpectrumModel::with_alpha(double alpha) const {
  SpectrumModel out = *this;
  out.alpha_ = alpha;
  return out;
}

double SpectrumModel::energy(int n) const {
  const double x = n;
  switch (family_) {
    case Family::Harmonic: return x;
    case Family::InfiniteWell: return x * (x + 2.0);
    case Family::AnharmonicX4: return x + scale_ * (x * x + x);
  }
  return 0.0;
}

double SpectrumModel::kappa() const {
  if (is_harmonic()) throw DomainViolation("kappa is undefined for the harmonic spectrum");
  return 1.0 / scale_;
}

double SpectrumModel::bargmann() const { return 2.0 + kappa(); }

double SpectrumModel::c0() const {
  if (family_ != Family::AnharmonicX4) return 0.0;
  return 0.75 * epsilon_ - 21.0 * epsilon_ * epsilon_ / 8.0;
}

bool SpectrumModel::same_spectrum(const SpectrumModel& other) const {
  return family_ == other.family_ && epsilon_ == other.epsilon_;
}

std::string SpectrumModel::name() const {
  switch (family_) {
    case Family::Harmonic: return "harmonic";
    case Family::InfiniteWell: return "well";
    case Family::AnharmonicX4: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "x4(eps=%.17g)", epsilon_);
      return buf;
    }
  }
  return "?";
}

double energy(const SpectrumModel& model, int n) {
  if (n < 0) throw DomainViolation("energy: negative level");
  return model.energy(n);
}

double log_e_product(const SpectrumModel& model, int n) {
  if (n < 0) throw DomainViolation("e_product: negative level");
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) sum += std::log(model.energy(k));
  return sum;
}

double log_e_product_closed(const SpectrumModel& model, int n) {
  if (n < 0) throw DomainViolation("e_product: negative level");
  switch (model.family()) {
    case Family::Harmonic: return std::lgamma(n + 1.0);
    case Family::InfiniteWell: return std::lgamma(n + 1.0) + std::lgamma(n + 3.0) - std::log(2.0);
    case Family::AnharmonicX4:
      return n * std::log(model.scale()) + std::lgamma(n + 1.0) + ln_gamma_ratio(n, model.bargmann());
  }
  return 0.0;
}

LadderElement ladder_minus(const SpectrumModel& model, int n) {
  if (n < 0) throw DomainViolation("ladder_minus: negative level");
  if (n == 0) return {0.0, 0.0};
  const double en = model.energy(n);
  return {std::sqrt(en), model.alpha() * (en - model.energy(n - 1))};
}

LadderElement ladder_plus(const SpectrumModel& model, int n) {
  if (n < 0) throw DomainViolation("ladder_plus: negative level");
  const double up = model.energy(n + 1);
  return {std::sqrt(up), -model.alpha() * (up - model.energy(n))};
}

double g_eigenvalue(const SpectrumModel& model, int n) {
  if (n < 0) throw DomainViolation("g_eigenvalue: negative level");
  return model.gap(n);
}

bool TruncatedState::is_normalized(double tol) const { return std::abs(norm() - 1.0) < tol; }

TruncatedState TruncatedState::normalized() const {
  const double nrm = norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NonConvergent("cannot normalize a zero or non-finite state");
  TruncatedState out = *this;
  out.coeffs /= nrm;
  out.spill = spill / (nrm * nrm);
  return out;
}

TruncatedState basis_state(const SpectrumModel& model, int n, int truncation) {
  if (n < 0 || n > truncation) throw DomainViolation("basis_state: level outside the window");
  TruncatedState out{Eigen::VectorXcd::Zero(truncation + 1), model, 0.0};
  out.coeffs(n) = 1.0;
  return out;
}

TruncatedState apply_annihilation(const TruncatedState& state) {
  const int n_max = state.truncation();
  if (n_max < 1) throw DomainViolation("apply_annihilation: needs truncation N >= 1");
  TruncatedState out{Eigen::VectorXcd(n_max), state.model, state.spill};
  for (int n = 0; n < n_max; ++n) out.coeffs(n) = ladder_minus(state.model, n + 1).value() * state.coeffs(n + 1);
  return out;
}

TruncatedState apply_creation(const TruncatedState& state) {
  const int n_max = state.truncation();
  if (n_max < 1) throw DomainViolation("apply_creation: needs truncation N >= 1");
  TruncatedState out{Eigen::VectorXcd::Zero(n_max + 1), state.model, state.spill};
  for (int n = 0; n < n_max; ++n) out.coeffs(n + 1) = ladder_plus(state.model, n).value() * state.coeffs(n);
  out.spill += std::norm(ladder_plus(state.model, n_max).value() * state.coeffs(n_max));
  return out;
}

double radius_estimate(const SpectrumModel& model, int n) {
  if (n < 1) throw DomainViolation("radius_estimate: needs n >= 1");
  return std::exp(log_e_product(model, n) / n);
}

void fix_global_phase(Eigen::VectorXcd& v, double floor) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > floor) {
      v *= std::conj(v(i)) / mag;
      v(i) = mag;
      return;
    }
  }
}

double phase_angle(double base, double alpha, double energy) {
  constexpr double two_pi_hi = 6.283185307179586;
  constexpr double two_pi_lo = 2.4492935982947064e-16;
  const double p = alpha * energy;
  const double p_err = std::fma(alpha, energy, -p);
  // base - p = s + s_err exactly.
  const double s = base - p;
  const double bb = s + p;
  const double s_err = (base - bb) - (-p - (s - bb));
  const double k = std::nearbyint(s / two_pi_hi);
  const double hi = std::fma(-k, two_pi_hi, s);
  return hi + (s_err - p_err - k * two_pi_lo);
}

}  // namespace gencs
