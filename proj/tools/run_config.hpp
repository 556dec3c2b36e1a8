#ifndef GENCS_TOOLS_RUN_CONFIG_HPP
#define GENCS_TOOLS_RUN_CONFIG_HPP

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gencs/spectrum.hpp"

namespace gencs::cli {

using cplx = std::complex<double>;

/// Bad flags, unreadable or malformed config, inconsistent settings. Exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StateFamily { Gk, Kp, Gis };
enum class OutputFormat { Csv, Json };

struct ModelConfig {
  Family family = Family::InfiniteWell;
  double epsilon = 0.4;  // used by the quartic family only
  double alpha = 0.0;

  SpectrumModel make() const;
  bool operator==(const ModelConfig&) const = default;
};

/// One sweep axis: `count` evenly spaced values from start to stop inclusive.
struct SweepAxis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  double value(int i) const;
  bool operator==(const SweepAxis&) const = default;
};

struct RunConfig {
  ModelConfig model;
  StateFamily state = StateFamily::Gk;
  std::optional<cplx> z;
  std::optional<cplx> lambda;
  /// 0 picks N adaptively.
  int truncation = 0;
  bool exploration = false;

  double tail_tolerance = 1e-16;
  double spill_tolerance = 1e-12;
  /// Replaces every verification tolerance when set.
  std::optional<double> verify_tolerance;

  std::string suite = "all";
  int n_max = 8;
  double small_epsilon = 1e-6;

  std::vector<SweepAxis> axes;
  /// 0 uses the hardware concurrency.
  int threads = 0;

  /// Empty writes to stdout.
  std::string output;
  OutputFormat format = OutputFormat::Csv;

  bool operator==(const RunConfig&) const = default;
};

/// "a+bi" forms: "2", "-1.5", "2+1i", "0.3-2e-3i", "i", "-i", "1.5i".
cplx parse_complex(const std::string& text);
std::string format_complex(cplx value);
/// A decimal or a ratio "p/q".
double parse_real(const std::string& text);

Family parse_model_family(const std::string& text);
std::string model_family_name(Family family);
StateFamily parse_state_family(const std::string& text);
std::string state_family_name(StateFamily family);
OutputFormat parse_format(const std::string& text);
std::string format_name(OutputFormat format);

/// "name=start:stop:count", e.g. "lambda_arg=0:6.283185307179586:64".
SweepAxis parse_axis(const std::string& text);
const std::vector<std::string>& axis_names();

nlohmann::ordered_json to_json(const RunConfig& config);
/// Strict: unknown keys and wrong types are ConfigErrors. Keys absent from
/// `j` keep their values from `base`.
RunConfig from_json(const nlohmann::ordered_json& j, RunConfig base = {});
RunConfig load_config_file(const std::string& path);

/// Cross-field checks; throws ConfigError.
void validate(const RunConfig& config);

}  // namespace gencs::cli

#endif  // GENCS_TOOLS_RUN_CONFIG_HPP
