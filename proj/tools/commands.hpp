#ifndef GENCS_TOOLS_COMMANDS_HPP
#define GENCS_TOOLS_COMMANDS_HPP

#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "table.hpp"

namespace gencs::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitDomain = 4,
};

/// Maps an exception escaping a command to its exit code.
int exit_code_for(const std::exception& e);
/// "TypeName: message" for library errors, the plain message otherwise.
std::string describe(const std::exception& e);

/// Column order of the sweep table; part of the output schema.
const std::vector<std::string>& sweep_columns();

/// Coefficient table and summary of one state.
struct BuildOutput {
  Table coefficients;
  Table summary;  // columns: field, value
  nlohmann::ordered_json json;
};
BuildOutput run_build(const RunConfig& config);

struct VerifyOutput {
  Table checks;
  bool passed = true;
  nlohmann::ordered_json json;
};
VerifyOutput run_verify(const RunConfig& config);
VerifyOutput run_limits(const RunConfig& config);

struct SweepOutput {
  Table points;
  nlohmann::ordered_json json;
};
SweepOutput run_sweep(const RunConfig& config);

/// Whole command line: parses flags, runs the subcommand, writes outputs and
/// returns the exit code. Data goes to `out` unless --out is given.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gencs::cli

#endif  // GENCS_TOOLS_COMMANDS_HPP
