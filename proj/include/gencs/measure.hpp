#ifndef GENCS_MEASURE_HPP
#define GENCS_MEASURE_HPP

#include <functional>
#include <limits>

#include "gencs/kp.hpp"
#include "gencs/spectrum.hpp"

namespace gencs {

enum class MeasureFamily { GkPlane, KpDisk };

/// Bessel kernel of the plane measure for su(1,1) spectra,
///   (2 kappa / pi) I_{1+kappa}(x) K_mu(x),  x = 2 sqrt(kappa) r.
/// MatchedOrder (mu = 1 + kappa) is the one whose moments are E(n-1)/pi.
/// HalfOrderK (mu = (1 + kappa)/2) is the variant with the K order halved;
/// its moments miss the target and it is kept for comparison.
enum class PlaneKernel { MatchedOrder, HalfOrderK };

/// Resolution-of-identity measure d mu = density(r) r dr dphi. The quadrature
/// owns the Jacobian r dr dphi; density() never includes it.
struct MeasureSpec {
  MeasureFamily family;
  SpectrumModel model;
  PlaneKernel kernel = PlaneKernel::MatchedOrder;

  double domain_radius() const {
    return family == MeasureFamily::KpDisk ? 1.0 : std::numeric_limits<double>::infinity();
  }
};

/// Harmonic plane: 1/pi. su(1,1) plane: the Bessel kernel above.
/// Disk: ((1 + kappa)/pi) / (1 - r^2)^2.
double density(const MeasureSpec& spec, double r);

/// Radial weight h(u) with u = r^2: N(r)^2 density(r) on the plane, so that
/// the moment condition reads int h(u) u^{n-1} du = E(n-1)/pi.
double plane_weight(const MeasureSpec& spec, double r);

struct QuadConfig {
  /// Gauss-Legendre nodes per panel.
  int nodes = 24;
  /// Geometrically graded panels toward singular endpoints.
  int graded_levels = 24;
  /// Angular trapezoid points for genuinely two-dimensional checks.
  int angles = 64;
};

/// Result of a radial integral with a two-rule error estimate.
struct QuadResult {
  double value;
  double error_estimate;
};

/// int_0^inf f(r) dr: graded panels on [0, 1], unit panels beyond until the
/// contribution is negligible. Error from comparing `nodes` and 2 * `nodes`.
QuadResult integrate_half_line(const std::function<double(double)>& f, const QuadConfig& quad);
/// int_0^1 f(u) du with panels graded toward u = 0.
QuadResult integrate_unit_graded(const std::function<double(double)>& f, const QuadConfig& quad);

/// Relative deviation of int_0^inf h(u) u^{n-1} du from E(n-1)/pi (plane only).
double moment_check(const MeasureSpec& spec, int n, const QuadConfig& quad = {});
/// The moment itself, for reporting.
double measured_moment(const MeasureSpec& spec, int n, const QuadConfig& quad = {});

/// max |M - I| for M_nm = int <psi_n|z><z|psi_m> d mu, n, m <= N. The angular
/// integral is done analytically, so M is diagonal; the radial integrals use
/// coefficients of the actual states at each node.
double identity_residual(const MeasureSpec& spec, int truncation, const QuadConfig& quad = {});

/// Reconstructs the target's coefficients n <= N through
/// int |zeta><zeta|target> d mu(zeta) by two-dimensional quadrature (graded
/// radial panels times an angular trapezoid rule); returns the max deviation.
double reproduce_kernel_check(const MeasureSpec& spec, const KpState& target, int truncation = 10,
                              const QuadConfig& quad = {});

}  // namespace gencs

#endif  // GENCS_MEASURE_HPP
