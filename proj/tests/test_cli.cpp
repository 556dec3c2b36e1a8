#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "cli_harness.hpp"
#include "commands.hpp"
#include "run_config.hpp"
#include "table.hpp"

using namespace gencs;
using namespace gencs::cli;
using gencs::testing::csv_matches;
using gencs::testing::golden_path;
using gencs::testing::read_text;
using gencs::testing::run_tool;
using gencs::testing::split_csv;
using cd = std::complex<double>;

namespace {

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return k;
  FAIL("missing column " << name);
  return 0;
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / ("gencs_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("complex and real parsing") {
  CHECK(parse_complex("2") == cd{2.0, 0.0});
  CHECK(parse_complex("2+1i") == cd{2.0, 1.0});
  CHECK(parse_complex("0.3-2e-3i") == cd{0.3, -2e-3});
  CHECK(parse_complex("1e-3+2E+1i") == cd{1e-3, 20.0});
  CHECK(parse_complex("i") == cd{0.0, 1.0});
  CHECK(parse_complex("-i") == cd{0.0, -1.0});
  CHECK(parse_complex("1.5i") == cd{0.0, 1.5});
  CHECK(parse_complex(" -1 - 2i ") == cd{-1.0, -2.0});
  CHECK_THROWS_AS(parse_complex("2+x"), ConfigError);
  CHECK_THROWS_AS(parse_complex(""), ConfigError);
  for (cd v : {cd{0.1, -0.7}, cd{-3.0, 0.0}, cd{1e-300, 5e10}}) CHECK(parse_complex(format_complex(v)) == v);
  CHECK(parse_real("2/3") == 2.0 / 3.0);
  CHECK(parse_real("0.25") == 0.25);
  CHECK_THROWS_AS(parse_real("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_real("abc"), ConfigError);
}

TEST_CASE("sweep axes") {
  const SweepAxis a = parse_axis("z_re=0:2:5");
  CHECK(a.name == "z_re");
  CHECK(a.count == 5);
  CHECK(a.value(4) == 2.0);
  CHECK(a.value(1) == 0.5);
  CHECK_THROWS_AS(parse_axis("bogus=0:1:2"), ConfigError);
  CHECK_THROWS_AS(parse_axis("t=0:1"), ConfigError);
}

TEST_CASE("config round-trips through JSON") {
  RunConfig c;
  c.model.family = Family::AnharmonicX4;
  c.model.epsilon = 0.4;
  c.model.alpha = 0.37;
  c.state = StateFamily::Gis;
  c.z = cd{1.3, 0.2};
  c.lambda = cd{1.0, 1.0};
  c.truncation = 30;
  c.verify_tolerance = 1e-9;
  c.axes = {parse_axis("lambda_arg=-1:1:5"), parse_axis("t=0:1:3")};
  c.threads = 3;
  c.output = "out.csv";
  c.format = OutputFormat::Json;
  const RunConfig back = from_json(nlohmann::ordered_json::parse(to_json(c).dump()));
  CHECK(back == c);
  CHECK(from_json(to_json(RunConfig{})) == RunConfig{});
  CHECK_THROWS_AS(from_json(nlohmann::ordered_json::parse(R"({"unknown_key": 1})")), ConfigError);
  CHECK_THROWS_AS(from_json(nlohmann::ordered_json::parse(R"({"model": {"family": "cubic"}})")), ConfigError);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.state = StateFamily::Gis;
  c.z = cd{1.0, 0.0};
  c.lambda = cd{-1.0, 0.0};
  try {
    validate(c);
    FAIL("lambda = -1 accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("no normalizable analytic solution") != std::string::npos);
  }
  c.lambda = cd{2.0, 0.0};
  CHECK_NOTHROW(validate(c));
  c.n_max = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("CSV quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  Table t{{"name", "value", "ok"}, {{std::string("x,y"), number(0.1), true}, {std::string("z"), number(NAN), false}}};
  std::ostringstream s;
  write_csv(s, t);
  CHECK(s.str() == "name,value,ok\r\n\"x,y\",0.1,true\r\nz,,false\r\n");
  const auto j = table_json(t);
  CHECK(j[1]["value"].is_null());
  CHECK(j.dump().find("NaN") == std::string::npos);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
}

TEST_CASE("exit-code contract") {
  CHECK(run_tool("build --model well --family gk --z 2+1i").exit_code == 0);
  CHECK(run_tool("verify --suite closed --model well --tolerance 1e-300").exit_code == 1);
  CHECK(run_tool("build --model well --family gis --z 1 --lambda -1").exit_code == 2);
  CHECK(run_tool("build --model cubic --family gk --z 1").exit_code == 2);
  CHECK(run_tool("build --model well --family gk --z 1+").exit_code == 2);
  CHECK(run_tool("frobnicate").exit_code == 2);
  CHECK(run_tool("build --model well --family gk --z 4 --truncation 3").exit_code == 3);
  CHECK(run_tool("build --model harmonic --family kp --z 1").exit_code == 4);
  CHECK(run_tool("build --model well --family gis --z 1 --lambda -0.5").exit_code == 3);
}

TEST_CASE("build output") {
  const auto r = run_tool("build --model well --family gk --z 2+1i --alpha 0 --format json");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["schema"] == "gencs.build/1");
  CHECK(std::abs(j["mean_energy"].get<double>() - 5.0) < 1e-9);

  // eps = 2/3 coefficients equal the well's.
  const auto well = split_csv(run_tool("build --model well --family gk --z 1").out);
  const auto x4 = split_csv(run_tool("build --model x4 --epsilon 2/3 --family gk --z 1").out);
  REQUIRE(well.size() == x4.size());
  for (std::size_t i = 1; i < well.size(); ++i)
    for (std::size_t k = 1; k < 3; ++k) CHECK(std::abs(std::stod(well[i][k]) - std::stod(x4[i][k])) < 1e-12);
}

TEST_CASE("golden files pin the output schema and values") {
  struct Golden {
    const char* args;
    const char* file;
  };
  const Golden cases[] = {
      {"build --model well --family gk --z 2+1i", "build_gk_well.csv"},
      {"build --model x4 --epsilon 0.4 --family kp --z 0.8-0.3i --alpha 0.37", "build_kp_x4.csv"},
      {"sweep --model well --family gis --z 1.3+0.2i --lambda 2 --axis lambda_arg=-1:1:5 --threads 2",
       "sweep_gis_well.csv"},
      {"verify --suite closed --model well", "verify_closed_well.csv"},
  };
  for (const Golden& g : cases) {
    CAPTURE(g.file);
    const auto r = run_tool(g.args);
    REQUIRE(r.exit_code == 0);
    std::string why;
    CHECK_MESSAGE(csv_matches(r.out, read_text(golden_path(g.file)), 1e-12, &why), why);
  }
  // The JSON document schema: ordered field names.
  const auto j = nlohmann::ordered_json::parse(
      run_tool("build --model well --family gis --z 1.3+0.2i --lambda 1+1i --format json").out);
  const auto golden = nlohmann::ordered_json::parse(read_text(golden_path("build_gis_keys.json")));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == golden.get<std::vector<std::string>>());
}

TEST_CASE("determinism") {
  const std::string args = "build --model x4 --epsilon 0.4 --family gis --z 1.3+0.2i --lambda 1+1i --format json";
  CHECK(run_tool(args).out == run_tool(args).out);
  const std::string sweep = "sweep --model well --family gis --z 0.5 --axis lambda_re=0.2:3:6 --axis lambda_im=-1:1:5";
  const auto one = run_tool(sweep + " --threads 1");
  const auto four = run_tool(sweep + " --threads 4");
  REQUIRE(one.exit_code == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("output files and sidecars") {
  const auto dir = scratch_dir();
  const auto out = dir / "state.csv";
  const auto r = run_tool("build --model well --family gis --z 1 --lambda 2 --out '" + out.string() + "'");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(std::filesystem::exists(out));
  CHECK(std::filesystem::exists(dir / "state.summary.csv"));
  const auto meta = nlohmann::ordered_json::parse(read_text(dir / "state.run.json"));
  CHECK(meta["schema"] == "gencs.run/1");
  CHECK(meta["exit_code"] == 0);
  // The data file carries no run metadata, so reruns are byte-identical.
  const std::string first = read_text(out);
  REQUIRE(run_tool("build --model well --family gis --z 1 --lambda 2 --out '" + out.string() + "'").exit_code == 0);
  CHECK(read_text(out) == first);

  // A config file supplies defaults that flags override.
  const auto cfg = dir / "config.json";
  {
    std::ofstream f(cfg);
    f << R"({"model": {"family": "x4", "epsilon": 0.4}, "state": "gk", "z": {"re": 1.2, "im": 0.0}})";
  }
  const auto j = nlohmann::ordered_json::parse(run_tool("build --config '" + cfg.string() + "' --format json").out);
  CHECK(std::abs(j["mean_energy"].get<double>() - 1.44) < 1e-9);
  const auto j2 =
      nlohmann::ordered_json::parse(run_tool("build --config '" + cfg.string() + "' --z 2 --format json").out);
  CHECK(std::abs(j2["mean_energy"].get<double>() - 4.0) < 1e-9);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep: energy is constant in time") {
  const auto rows = split_csv(
      run_tool("sweep --model well --family gk --z 1.5+0.5i --axis t=0:6.283185307179586:9").out);
  REQUIRE(rows.size() == 10);
  const std::size_t e = column(rows[0], "mean_energy");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][e]) - 2.5) < 1e-12);
}

TEST_CASE("sweep: the |lambda| = 1 circle has equal variances") {
  const auto rows = split_csv(run_tool("sweep --model well --family gis --z 1.3+0.2i --lambda 1 "
                                       "--axis lambda_arg=-1.4:1.4:9")
                                  .out);
  REQUIRE(rows.size() == 10);
  const std::size_t w = column(rows[0], "var_w"), p = column(rows[0], "var_p");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][w]) - std::stod(rows[i][p])) < 1e-9);
}

TEST_CASE("sweep: crossing Re lambda = 0 records NotNormalizable") {
  const auto r = run_tool("sweep --model well --family gis --z 0.5 --lambda 0.5+0.3i --axis lambda_re=0.4:-0.4:5");
  REQUIRE(r.exit_code == 0);
  const auto rows = split_csv(r.out);
  REQUIRE(rows.size() == 6);
  const std::size_t err = column(rows[0], "error"), re = column(rows[0], "lambda_re");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double lam_re = std::stod(rows[i][re]);
    CAPTURE(lam_re);
    if (lam_re > 0.0)
      CHECK(rows[i][err].empty());
    else
      CHECK(rows[i][err].find("NotNormalizable") != std::string::npos);
  }
}

TEST_CASE("verify reports echo tolerances") {
  std::ostringstream out, err;
  CHECK(run_cli({"verify", "--suite", "saturation", "--model", "well", "--lambda", "2", "--z", "1.3"}, out, err) == 0);
  const auto rows = split_csv(out.str());
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == std::vector<std::string>{"suite", "name", "measured", "tolerance", "passed", "error"});
  CHECK(err.str().find("failed") != std::string::npos);
}
