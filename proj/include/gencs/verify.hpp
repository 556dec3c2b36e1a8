#ifndef GENCS_VERIFY_HPP
#define GENCS_VERIFY_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "gencs/spectrum.hpp"

namespace gencs {

/// One row of a verification report.
struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  /// Error message when the check could not be evaluated.
  std::string error;
};

struct VerifyOptions {
  SpectrumModel model = SpectrumModel::infinite_well();
  /// When set, GIS suites use this single point instead of their default grid.
  std::optional<std::complex<double>> lambda;
  std::optional<std::complex<double>> z;
  /// Highest moment / basis index for the measure suites.
  int n_max = 8;
};

/// Suite names accepted by run_suite, in the order "all" runs them.
const std::vector<std::string>& suite_names();

/// Runs one named suite (or "all"). Unknown names throw DomainViolation.
/// Failures inside a check become failed rows, never exceptions.
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options);

/// Reports on the quartic family's two limits: eps = 2/3 against the well and
/// eps -> 0 against the harmonic oscillator.
std::vector<CheckResult> limits_report(double small_epsilon = 1e-6);

}  // namespace gencs

#endif  // GENCS_VERIFY_HPP
