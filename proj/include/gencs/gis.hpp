#ifndef GENCS_GIS_HPP
#define GENCS_GIS_HPP

#include <Eigen/Core>

#include <complex>
#include <vector>

#include "gencs/specfun.hpp"
#include "gencs/spectrum.hpp"

namespace gencs {

/// Eigenvalue problem [(1 - lambda) A+ + (1 + lambda) A-] |psi> = 2 z |psi>.
/// The phase parameter alpha is carried by the spectrum model.
struct GisParams {
  cplx lambda;
  cplx z;

  /// Re(lambda) > 0: the solution is normalizable and analytic.
  bool in_analytic_domain() const { return lambda.real() > 0.0; }
};

/// Rejects lambda = -1 with LambdaDegenerate.
void validate(const GisParams& params);

inline constexpr int kGisTruncationCap = 4000;

/// Raw solution b_n exp(-i alpha e_n), n = 0..N, with a_0 = 1, from
///   (1 + lambda) sqrt(e_{n+1}) b_{n+1} = 2 z b_n - (1 - lambda) sqrt(e_n) b_{n-1}.
/// Works for any lambda != -1; no normalizability check.
Eigen::VectorXcd gis_recurrence_coefficients(const SpectrumModel& model, const GisParams& params, int truncation);

struct GisBuildOptions {
  /// Fixed truncation; <= 0 picks N adaptively (cap 4000).
  int truncation = 0;
  /// Allow Re(lambda) <= 0 with a fixed truncation; the result is then a
  /// truncated, non-normalizable solution and `spill` reports the loss.
  bool exploration = false;
  /// Largest relative norm squared allowed beyond N.
  double tail_tolerance = 1e-16;
};

/// Normalized generalized intelligent state from the recurrence, global phase
/// fixed so the first nonzero coefficient is real positive. Throws
/// LambdaDegenerate, NotNormalizable (Re lambda <= 0 or no decay by the cap)
/// or TruncationInsufficient (fixed N too small).
TruncatedState build_gis_recurrence(const SpectrumModel& model, const GisParams& params,
                                    const GisBuildOptions& options = {});

/// Same as build_gis_recurrence, except lambda = 1 goes through the GK path.
TruncatedState build_gis(const SpectrumModel& model, const GisParams& params, const GisBuildOptions& options = {});

/// Table D(m, h) = D(m-1, h) + e_m D(m-2, h-1), D(m, 0) = 1: sums of products of
/// h energies with indices in 1..m pairwise at least 2 apart. Delta(n, h) = D(n-1, h).
template <typename T>
std::vector<std::vector<T>> delta_table(const std::vector<T>& e, int n_max) {
  // d[m + 1][h] holds D(m, h) for m >= -1.
  const int h_max = n_max / 2;
  std::vector<std::vector<T>> d(n_max + 1, std::vector<T>(h_max + 1, T(0)));
  for (auto& row : d) row[0] = T(1);
  for (int m = 1; m < n_max; ++m)
    for (int h = 1; h <= h_max; ++h) d[m + 1][h] = d[m][h] + e[m] * d[m - 1][h - 1];
  return d;
}

/// Delta(n, h) for 0 <= h <= n/2.
double delta_nh(const SpectrumModel& model, int n, int h);

/// Closed form a_n = exp(-i alpha e_n) / sqrt(E(n)) sum_h (-v)^h u^{n-2h} Delta(n, h),
/// u = 2z / (1 + lambda), v = (1 - lambda) / (1 + lambda), with a_0 = 1.
cplx gis_coeff_closed(const SpectrumModel& model, const GisParams& params, int n);

struct UncertaintyReport {
  double mean_w = 0.0;
  double mean_p = 0.0;
  double var_w = 0.0;
  double var_p = 0.0;
  double mean_g = 0.0;
  /// From i[(dA+)^2 - (dA-)^2].
  double mean_f = 0.0;
  /// |mean_f - 2 Re<dW psi|dP psi>|, an internal consistency check.
  double mean_f_crosscheck = 0.0;
  double delta = 0.0;
  double saturation_residual = 0.0;
  /// e_{N+1} |c_N|^2: what A+ pushes past the truncation window.
  double spill = 0.0;
};

inline constexpr double kSpillTolerance = 1e-12;

/// Variances of W = (A- + A+)/sqrt 2 and P = i(A+ - A-)/sqrt 2, means of G and F,
/// and the Robertson-Schroedinger saturation residual of a normalized state.
UncertaintyReport observables(const TruncatedState& state, double spill_tolerance = kSpillTolerance);

enum class AnalyticKind { KummerPlane, DiskExponents };

/// Closed-form representation of a GIS.
///   KummerPlane:   Psi(x) = exp(c x) 1F1(a; b; -2 c x) with Taylor coefficients
///                  t_n = a_n / sqrt(E(n)) (phases removed).
///   DiskExponents: Phi(zeta) = (1 + w zeta)^{alpha_plus} (1 - w zeta)^{alpha_minus},
///                  Taylor coefficients a_n sqrt((b)_n / n!).
/// w is the principal root of (lambda - 1)/(lambda + 1); c = sqrt(kappa) w.
struct AnalyticSolution {
  AnalyticKind kind;
  cplx a, b, c;
  cplx alpha_plus, alpha_minus;
  cplx w;
};

/// Throws LambdaDegenerate for lambda = +-1, OutsideAnalyticDomain for Re lambda <= 0,
/// DomainViolation for the harmonic spectrum (no Kummer parameter b there).
AnalyticSolution analytic_gk_solution(const SpectrumModel& model, const GisParams& params);
AnalyticSolution analytic_kp_solution(const SpectrumModel& model, const GisParams& params);

/// Which of the two equivalent Kummer forms to evaluate:
///   upper: exp(c x) 1F1(a; b; -2cx),  lower: exp(-c x) 1F1(b - a; b; 2cx).
/// Auto picks the form whose argument has nonnegative real part.
enum class KummerForm { Upper, Lower, Auto };

cplx kummer_psi(const AnalyticSolution& sol, cplx x, KummerForm form = KummerForm::Auto);
/// Taylor coefficients t_0..t_nmax of Psi.
Eigen::VectorXcd kummer_taylor(const AnalyticSolution& sol, int nmax);
/// State coefficients a_n = t_n sqrt(E(n)) exp(-i alpha e_n), not normalized.
Eigen::VectorXcd gis_coeffs_from_kummer(const SpectrumModel& model, const AnalyticSolution& sol, int nmax);

cplx disk_phi(const AnalyticSolution& sol, cplx zeta);
/// (2w)^n P_n^{(alpha_plus - n, alpha_minus - n)}(0), n = 0..nmax.
Eigen::VectorXcd disk_jacobi_coefficients(const AnalyticSolution& sol, int nmax);
/// Taylor coefficients of Phi by multiplying the two binomial series.
Eigen::VectorXcd disk_taylor_coefficients(const AnalyticSolution& sol, int nmax);

/// Normalized state a_n = g_n exp(-i alpha e_n) / sqrt((b)_n / n!) built from the
/// disk solution, global phase fixed. `truncation <= 0` is adaptive.
TruncatedState gis_state_from_disk(const SpectrumModel& model, const GisParams& params, int truncation = 0);

/// Psi(x) = sum_n t_n x^n with t_n = b_n / sqrt(E(n)) summed from
///   (1 + lambda) e_{n+1} t_{n+1} = 2 z t_n - (1 - lambda) t_{n-1},  t_0 = 1.
/// Valid for every spectrum, and well conditioned where the Kummer parameters
/// are huge (eps -> 0).
cplx gis_plane_function(const SpectrumModel& model, const GisParams& params, cplx x);

/// Harmonic-oscillator GIS in the plane: exp(2 z x / (1 + lambda) + ((lambda - 1)/(lambda + 1)) x^2 / 2).
cplx harmonic_gis_gaussian(const GisParams& params, cplx x);

/// Relative residual of the Laplace identity
///   int_0^inf x^{b-1} Psi(x) exp(-x/s) dx = Gamma(b) s^b Phi(sqrt(kappa) s),
/// by Gauss-Legendre panels on [0, R] with R set by the exponential decay.
/// lambda = 1 uses Psi = 0F1(; b; kappa z x) and Phi(zeta) = exp(sqrt(kappa) z zeta).
double laplace_bridge_check(const SpectrumModel& model, const GisParams& params, double s,
                            KummerForm form = KummerForm::Auto);

}  // namespace gencs

#endif  // GENCS_GIS_HPP
