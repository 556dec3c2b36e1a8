#ifndef GENCS_GK_HPP
#define GENCS_GK_HPP

#include <complex>

#include "gencs/spectrum.hpp"

namespace gencs {

/// Gazeau-Klauder coherent state |z, alpha>, truncated.
struct GkState {
  std::complex<double> z;
  double alpha = 0.0;
  TruncatedState body;
  /// The normalization constant N(|z|) multiplying every coefficient.
  double norm_constant = 1.0;
};

inline constexpr int kGkTruncationCap = 2000;
inline constexpr double kGkTailTolerance = 1e-16;

/// N(r) = (sum_n r^{2n} / E(n))^{-1/2}, from the 0F1 closed form
/// (exp(-r^2/2) for the harmonic oscillator).
double gk_normalization(const SpectrumModel& model, double r);
/// The same constant by direct log-space summation of the defining series.
double gk_normalization_series(const SpectrumModel& model, double r);

/// Builds |z, alpha> with alpha taken from the model. `truncation <= 0`
/// selects the smallest N whose last term is below 1e-20 of the running
/// sum. Throws TruncationInsufficient when the dropped norm squared exceeds
/// `tail_tolerance`.
GkState build_gk(const SpectrumModel& model, std::complex<double> z, int truncation = 0,
                 double tail_tolerance = kGkTailTolerance);

/// The first N+1 coefficients of |z, alpha>, exactly normalized, with no
/// check on the dropped tail.
Eigen::VectorXcd gk_coefficients(const SpectrumModel& model, std::complex<double> z, int truncation);

/// <s1|s2> by coefficient sum over the common window.
std::complex<double> gk_overlap(const GkState& s1, const GkState& s2);
/// <s1|s2> from the 0F1 kernel; needs equal alpha.
std::complex<double> gk_overlap_closed(const GkState& s1, const GkState& s2);

/// exp(-iHt)|z, alpha> = |z, alpha + t>.
GkState evolve(const GkState& state, double t);
TruncatedState evolve(const TruncatedState& state, double t);

/// sum_n e_n |c_n|^2.
double mean_energy(const TruncatedState& state);
inline double mean_energy(const GkState& state) { return mean_energy(state.body); }

}  // namespace gencs

#endif  // GENCS_GK_HPP
