#ifndef GENCS_KP_HPP
#define GENCS_KP_HPP

#include <Eigen/Core>

#include <complex>
#include <vector>

#include "gencs/gk.hpp"
#include "gencs/spectrum.hpp"

namespace gencs {

/// pi(m, j) for 0 <= m <= m_max, 0 <= j <= j_max, defined by
///   pi(m, 0) = 1,  pi(0, j) = 0 (j >= 1),
///   pi(m, j) = pi(m - 1, j) + e_m pi(m + 1, j - 1),
/// which unrolls to the nested sums sum_{i1<=m} e_{i1} sum_{i2<=i1+1} ...
/// The scaled variant uses kappa * e_m. Stored as logarithms.
class PiTable {
 public:
  PiTable(const SpectrumModel& model, int m_max, int j_max, bool scaled = false);

  double log_value(int m, int j) const { return log_(m, j); }
  double value(int m, int j) const;
  int m_max() const { return m_max_; }
  int j_max() const { return j_max_; }
  bool scaled() const { return scaled_; }

 private:
  Eigen::MatrixXd log_;
  int m_max_;
  int j_max_;
  bool scaled_;
};

/// Plain-arithmetic pi table from level energies e[1..]; e[0] is ignored.
/// Instantiate with an integer type for exact checks.
template <typename T>
std::vector<std::vector<T>> pi_table_direct(const std::vector<T>& e, int m_max, int j_max) {
  const int rows = m_max + j_max + 1;
  std::vector<std::vector<T>> pi(rows + 1, std::vector<T>(j_max + 1, T(0)));
  for (int m = 0; m <= rows; ++m) pi[m][0] = T(1);
  for (int j = 1; j <= j_max; ++j)
    for (int m = 1; m <= rows - j; ++m) pi[m][j] = pi[m - 1][j] + e[m] * pi[m + 1][j - 1];
  pi.resize(m_max + 1);
  return pi;
}

/// pi(m, j) through the table.
double pi_value(const SpectrumModel& model, int m, int j, bool scaled = false);

/// c_n(r) = sum_j (-r^2)^j pi(n+1, j) / (n+2j)!. With `scaled`, the kappa-scaled
/// table is summed at R = sqrt(s) r, which gives the same function.
/// `terms <= 0` grows the number of terms until the tail is below 1e-17 of the
/// sum. The series converges only for sqrt(s) r < pi/2; outside, or when a
/// fixed term count is not enough, NonConvergent is thrown.
double cn_series(const SpectrumModel& model, int n, double r, int terms = 0, bool scaled = false);

/// c_n(r) = cosh(R)^{-n-b} sinh(R)^n / (n! R^n), R = sqrt(s) r.
double cn_closed(const SpectrumModel& model, int n, double r);
double log_cn_closed(const SpectrumModel& model, int n, double r);

/// Klauder-Perelomov state on the unit disk.
struct KpState {
  std::complex<double> z;
  std::complex<double> zeta;
  double alpha = 0.0;
  TruncatedState body;
};

inline constexpr int kKpTruncationCap = 20000;

/// zeta = Z tanh|Z| / |Z|, Z = sqrt(s) z.
std::complex<double> kp_zeta(const SpectrumModel& model, std::complex<double> z);

/// Builds |zeta, alpha> from the disk form
///   (1 - |zeta|^2)^{b/2} zeta^n sqrt((b)_n / n!) exp(-i alpha e_n).
/// `truncation <= 0` is adaptive. Harmonic spectra are rejected: their KP and
/// GK states coincide.
KpState build_kp(const SpectrumModel& model, std::complex<double> z, int truncation = 0,
                 double tail_tolerance = kGkTailTolerance);
/// Same state from a disk label directly (|zeta| < 1).
KpState build_kp_from_zeta(const SpectrumModel& model, std::complex<double> zeta, int truncation = 0,
                           double tail_tolerance = kGkTailTolerance);

/// The first N+1 disk-form coefficients at label zeta, with no tail check.
Eigen::VectorXcd kp_disk_coefficients(const SpectrumModel& model, std::complex<double> zeta, int truncation);

/// Coefficients z^n c_n(|z|) sqrt(E(n)) exp(-i alpha e_n), n = 0..N.
Eigen::VectorXcd kp_coeffs_exp_form(const SpectrumModel& model, std::complex<double> z, int truncation);

KpState evolve(const KpState& state, double t);

/// <s1|s2> by coefficient sum.
std::complex<double> kp_overlap(const KpState& s1, const KpState& s2);
/// <s1|s2> from sum_n (conj(zeta) zeta')^n (b)_n / n! exp(-i (alpha' - alpha) e_n).
std::complex<double> kp_overlap_series(const KpState& s1, const KpState& s2);
/// Closed form for equal alpha: [(1-|zeta|^2)(1-|zeta'|^2)]^{b/2} / (1 - conj(zeta) zeta')^b.
std::complex<double> kp_overlap_closed(const KpState& s1, const KpState& s2);

}  // namespace gencs

#endif  // GENCS_KP_HPP
