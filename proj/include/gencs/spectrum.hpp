#ifndef GENCS_SPECTRUM_HPP
#define GENCS_SPECTRUM_HPP

#include <Eigen/Core>

#include <complex>
#include <string>

namespace gencs {

enum class Family { Harmonic, InfiniteWell, AnharmonicX4 };

/// A factorizable spectrum e_n with e_0 = 0, plus the phase parameter alpha.
///
/// The two nonharmonic families share the structure
///   e_n = s * n * (n + b - 1),  b = 2 + kappa,  kappa = 1 / s,
/// with s = 1 for the infinite well and s = 3 eps / 2 for the quartic
/// oscillator.
class SpectrumModel {
 public:
  static SpectrumModel harmonic(double alpha = 0.0);
  static SpectrumModel infinite_well(double alpha = 0.0);
  static SpectrumModel anharmonic(double epsilon, double alpha = 0.0);

  Family family() const { return family_; }
  double epsilon() const { return epsilon_; }
  double alpha() const { return alpha_; }
  SpectrumModel with_alpha(double alpha) const;

  double energy(int n) const;
  /// e_{n+1} - e_n, the eigenvalue of [A-, A+] on |n>.
  double gap(int n) const { return energy(n + 1) - energy(n); }

  /// Quadratic coefficient s (0 for the harmonic oscillator).
  double scale() const { return scale_; }
  /// kappa = 1 / s; undefined for the harmonic oscillator.
  double kappa() const;
  /// b = 2 + kappa, the su(1,1) parameter 2k; undefined for the harmonic oscillator.
  double bargmann() const;
  bool is_harmonic() const { return family_ == Family::Harmonic; }

  /// Ground-state shift 3 eps / 4 - 21 eps^2 / 8 (quartic family, else 0).
  /// Informational only: the spectrum already has e_0 = 0.
  double c0() const;

  /// Same spectrum (family and epsilon); alpha is ignored.
  bool same_spectrum(const SpectrumModel& other) const;
  std::string name() const;

 private:
  SpectrumModel(Family family, double epsilon, double alpha);
  Family family_;
  double epsilon_;
  double alpha_;
  double scale_;
};

double energy(const SpectrumModel& model, int n);

/// Logarithm of E(n) = e_1 e_2 ... e_n (E(0) = 1), by direct summation.
double log_e_product(const SpectrumModel& model, int n);
/// Logarithm of E(n) from the Gamma-function closed forms.
double log_e_product_closed(const SpectrumModel& model, int n);

/// A matrix element sqrt(e) * exp(i phase) of a ladder operator.
struct LadderElement {
  double magnitude;
  double phase;
  std::complex<double> value() const { return std::polar(magnitude, phase); }
};

/// <n-1| A- |n>.
LadderElement ladder_minus(const SpectrumModel& model, int n);
/// <n+1| A+ |n>.
LadderElement ladder_plus(const SpectrumModel& model, int n);
double g_eigenvalue(const SpectrumModel& model, int n);

/// Finite expansion sum_n c_n |psi_n>, n = 0..N.
struct TruncatedState {
  Eigen::VectorXcd coeffs;
  SpectrumModel model;
  /// Norm squared known to be lost outside the window (diagnostic).
  double spill = 0.0;

  int truncation() const { return static_cast<int>(coeffs.size()) - 1; }
  double norm() const { return coeffs.norm(); }
  bool is_normalized(double tol = 1e-12) const;
  TruncatedState normalized() const;
};

TruncatedState basis_state(const SpectrumModel& model, int n, int truncation);

/// A- applied to the state; the result lives on n = 0..N-1.
TruncatedState apply_annihilation(const TruncatedState& state);
/// A+ applied to the state on the same window n = 0..N; the component pushed
/// to n = N+1 is dropped and its norm squared is added to `spill`.
TruncatedState apply_creation(const TruncatedState& state);

/// base - alpha * energy reduced to [-pi, pi]. The product and the reduction
/// are carried with an error term, so phases of high levels stay accurate to
/// a few ulp of pi rather than of alpha * energy.
double phase_angle(double base, double alpha, double energy);

/// E(n)^{1/n} at the given n; a growing sequence signals an infinite
/// convergence radius for the coherent-state series.
double radius_estimate(const SpectrumModel& model, int n);

/// Rotates the vector so its first entry with modulus above `floor` is real
/// and positive.
void fix_global_phase(Eigen::VectorXcd& v, double floor = 0.0);

}  // namespace gencs

#endif  // GENCS_SPECTRUM_HPP
