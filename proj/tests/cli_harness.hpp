#ifndef GENCS_TESTS_CLI_HARNESS_HPP
#define GENCS_TESTS_CLI_HARNESS_HPP

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gencs::testing {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

/// Runs the CLI binary with the given argument string; stderr is discarded.
inline RunResult run_tool(const std::string& args) {
  const std::string cmd = std::string("'") + GENCS_CLI_PATH + "' " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline std::string golden_path(const std::string& name) { return std::string(GENCS_GOLDEN_DIR) + "/" + name; }

/// Parses RFC 4180 CSV with CRLF record ends into unquoted fields.
inline std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (quoted) {
      if (c == '"' && k + 1 < text.size() && text[k + 1] == '"') {
        field += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && k + 1 < text.size() && text[k + 1] == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      ++k;
    } else {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Compares two numeric CSV tables: identical header and shape, text cells
/// equal, numeric cells within `tol` (absolute, scaled by max(1, |golden|)).
inline bool csv_matches(const std::string& got, const std::string& golden, double tol, std::string* why = nullptr) {
  const auto a = split_csv(got), b = split_csv(golden);
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (a.size() != b.size()) return fail("row count differs");
  if (a.empty() || a[0] != b[0]) return fail("header differs");
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return fail("column count differs in row " + std::to_string(i));
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (a[i][j] == b[i][j]) continue;
      char* end_a = nullptr;
      char* end_b = nullptr;
      const double x = std::strtod(a[i][j].c_str(), &end_a);
      const double y = std::strtod(b[i][j].c_str(), &end_b);
      if (*end_a != '\0' || *end_b != '\0' || a[i][j].empty() || b[i][j].empty())
        return fail("cell " + a[0][j] + " in row " + std::to_string(i) + " differs");
      if (std::abs(x - y) > tol * std::max(1.0, std::abs(y)))
        return fail("value " + a[0][j] + " in row " + std::to_string(i) + ": " + a[i][j] + " vs " + b[i][j]);
    }
  }
  return true;
}

}  // namespace gencs::testing

#endif  // GENCS_TESTS_CLI_HARNESS_HPP
