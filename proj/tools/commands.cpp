#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gencs/errors.hpp"
#include "gencs/gis.hpp"
#include "gencs/gk.hpp"
#include "gencs/kp.hpp"
#include "gencs/verify.hpp"

namespace gencs::cli {

namespace {

using Json = nlohmann::ordered_json;

Json model_json(const ModelConfig& m) {
  Json j;
  j["family"] = model_family_name(m.family);
  j["epsilon"] = m.family == Family::AnharmonicX4 ? Json(m.epsilon) : Json(nullptr);
  j["alpha"] = m.alpha;
  return j;
}

Json complex_or_null(const std::optional<cplx>& v) {
  if (!v) return nullptr;
  return Json{{"re", v->real()}, {"im", v->imag()}};
}

cplx require_z(const RunConfig& c) {
  if (!c.z) throw ConfigError("this command needs --z");
  return *c.z;
}

cplx require_lambda(const RunConfig& c) {
  if (!c.lambda) throw ConfigError("gis states need --lambda");
  return *c.lambda;
}

TruncatedState build_state(const RunConfig& c, const SpectrumModel& model, cplx z, std::optional<cplx> lambda) {
  switch (c.state) {
    case StateFamily::Gk:
      return build_gk(model, z, c.truncation, c.tail_tolerance).body;
    case StateFamily::Kp:
      return build_kp(model, z, c.truncation, c.tail_tolerance).body;
    case StateFamily::Gis:
      break;
  }
  return build_gis(model, {*lambda, z}, {c.truncation, c.exploration, c.tail_tolerance});
}

void add_field(Table& t, Json& j, const std::string& name, const Cell& value) {
  t.rows.push_back({name, value});
  j[name] = cell_json(value);
}

void apply_tolerance_override(std::vector<CheckResult>& rows, const std::optional<double>& tol) {
  if (!tol) return;
  for (CheckResult& r : rows) {
    r.tolerance = *tol;
    if (r.error.empty()) r.passed = std::isfinite(r.measured) && r.measured <= *tol;
  }
}

VerifyOutput check_output(const std::string& schema, const RunConfig& c, std::vector<CheckResult> rows) {
  apply_tolerance_override(rows, c.verify_tolerance);
  VerifyOutput out;
  out.checks.columns = {"suite", "name", "measured", "tolerance", "passed", "error"};
  std::int64_t failed = 0;
  for (const CheckResult& r : rows) {
    const bool has_value = r.error.empty();
    out.checks.rows.push_back({r.suite, r.name, has_value ? number(r.measured) : Cell{}, number(r.tolerance),
                               r.passed, r.error});
    if (!r.passed) ++failed;
  }
  out.passed = failed == 0;
  out.json["schema"] = schema;
  out.json["model"] = model_json(c.model);
  out.json["suite"] = schema == "gencs.limits/1" ? Json("limits") : Json(c.suite);
  out.json["passed"] = out.passed;
  out.json["checks_run"] = static_cast<std::int64_t>(rows.size());
  out.json["checks_failed"] = failed;
  out.json["checks"] = table_json(out.checks);
  return out;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash + 1);
  return (has_ext ? path.substr(0, dot) : path) + suffix;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << content;
  if (!f) throw ConfigError("cannot write output file '" + path + "'");
}

std::string csv_text(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (const auto* err = dynamic_cast<const Error*>(&e))
    return err->kind() == ErrorKind::Numeric ? kExitNumeric : kExitDomain;
  return kExitConfig;
}

std::string describe(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return std::string(err->name()) + ": " + err->what();
  return e.what();
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "index",  "z_re",   "z_im",  "lambda_re", "lambda_im", "t",      "truncation", "norm",
      "mean_energy", "mean_w", "mean_p", "var_w",   "var_p",     "mean_g", "mean_f",     "saturation_residual",
      "error"};
  return cols;
}

BuildOutput run_build(const RunConfig& c) {
  const SpectrumModel model = c.model.make();
  const cplx z = require_z(c);
  std::optional<cplx> lambda;
  if (c.state == StateFamily::Gis) lambda = require_lambda(c);
  const TruncatedState state = build_state(c, model, z, lambda);

  BuildOutput out;
  out.coefficients.columns = {"n", "re", "im", "abs2"};
  for (Eigen::Index n = 0; n < state.coeffs.size(); ++n) {
    const cplx v = state.coeffs(n);
    out.coefficients.rows.push_back({static_cast<std::int64_t>(n), number(v.real()), number(v.imag()), number(std::norm(v))});
  }

  Table& s = out.summary;
  s.columns = {"field", "value"};
  Json& j = out.json;
  add_field(s, j, "schema", std::string("gencs.build/1"));
  add_field(s, j, "model", model_family_name(c.model.family));
  add_field(s, j, "epsilon", c.model.family == Family::AnharmonicX4 ? number(c.model.epsilon) : Cell{});
  add_field(s, j, "alpha", number(c.model.alpha));
  add_field(s, j, "state", state_family_name(c.state));
  add_field(s, j, "z_re", number(z.real()));
  add_field(s, j, "z_im", number(z.imag()));
  add_field(s, j, "lambda_re", lambda ? number(lambda->real()) : Cell{});
  add_field(s, j, "lambda_im", lambda ? number(lambda->imag()) : Cell{});
  add_field(s, j, "truncation", static_cast<std::int64_t>(state.truncation()));
  add_field(s, j, "norm", number(state.norm()));
  add_field(s, j, "mean_energy", number(mean_energy(state)));
  add_field(s, j, "window_loss", number(state.spill));
  add_field(s, j, "tail_tolerance", number(c.tail_tolerance));
  add_field(s, j, "spill_tolerance", number(c.spill_tolerance));
  if (lambda) {
    const UncertaintyReport r = observables(state, c.spill_tolerance);
    add_field(s, j, "mean_w", number(r.mean_w));
    add_field(s, j, "mean_p", number(r.mean_p));
    add_field(s, j, "var_w", number(r.var_w));
    add_field(s, j, "var_p", number(r.var_p));
    add_field(s, j, "mean_g", number(r.mean_g));
    add_field(s, j, "mean_f", number(r.mean_f));
    add_field(s, j, "mean_f_crosscheck_residual", number(r.mean_f_crosscheck));
    add_field(s, j, "delta", number(r.delta));
    add_field(s, j, "saturation_residual", number(r.saturation_residual));
    add_field(s, j, "spill", number(r.spill));
  }
  j["coefficients"] = table_json(out.coefficients);
  return out;
}

VerifyOutput run_verify(const RunConfig& c) {
  VerifyOptions o;
  o.model = c.model.make();
  o.lambda = c.lambda;
  o.z = c.z;
  o.n_max = c.n_max;
  return check_output("gencs.verify/1", c, run_suite(c.suite, o));
}

VerifyOutput run_limits(const RunConfig& c) { return check_output("gencs.limits/1", c, limits_report(c.small_epsilon)); }

SweepOutput run_sweep(const RunConfig& c) {
  if (c.axes.empty()) throw ConfigError("sweep needs at least one --axis");
  const bool gis = c.state == StateFamily::Gis;
  auto has_axis = [&](const std::string& prefix) {
    return std::any_of(c.axes.begin(), c.axes.end(), [&](const SweepAxis& a) { return a.name.rfind(prefix, 0) == 0; });
  };
  if (gis && !c.lambda && !has_axis("lambda_")) throw ConfigError("gis sweeps need --lambda or a lambda axis");
  if (!gis && has_axis("lambda_")) throw ConfigError("lambda axes apply to gis sweeps only");
  const SpectrumModel base_model = c.model.make();
  const cplx z0 = c.z.value_or(cplx{0.0, 0.0});
  const cplx lambda0 = c.lambda.value_or(cplx{1.0, 0.0});

  std::size_t total = 1;
  for (const SweepAxis& a : c.axes) total *= static_cast<std::size_t>(a.count);

  auto point_row = [&](std::size_t index) -> std::vector<Cell> {
    // First axis outermost.
    std::vector<int> idx(c.axes.size());
    std::size_t rest = index;
    for (std::size_t k = c.axes.size(); k-- > 0;) {
      idx[k] = static_cast<int>(rest % c.axes[k].count);
      rest /= c.axes[k].count;
    }
    cplx z = z0, lambda = lambda0;
    double t = 0.0;
    for (std::size_t k = 0; k < c.axes.size(); ++k) {
      const std::string& name = c.axes[k].name;
      const double v = c.axes[k].value(idx[k]);
      if (name == "z_re") z.real(v);
      else if (name == "z_im") z.imag(v);
      else if (name == "z_abs") z = std::polar(v, std::arg(z));
      else if (name == "z_arg") z = std::polar(std::abs(z), v);
      else if (name == "lambda_re") lambda.real(v);
      else if (name == "lambda_im") lambda.imag(v);
      else if (name == "lambda_abs") lambda = std::polar(v, std::arg(lambda));
      else if (name == "lambda_arg") lambda = std::polar(std::abs(lambda), v);
      else if (name == "t") t = v;
    }
    std::vector<Cell> row(sweep_columns().size());
    row[0] = static_cast<std::int64_t>(index);
    row[1] = number(z.real());
    row[2] = number(z.imag());
    if (gis) {
      row[3] = number(lambda.real());
      row[4] = number(lambda.imag());
    }
    row[5] = number(t);
    try {
      TruncatedState state = build_state(c, base_model, z, gis ? std::optional<cplx>(lambda) : std::nullopt);
      if (t != 0.0) state = evolve(state, t);
      const UncertaintyReport r = observables(state, c.spill_tolerance);
      row[6] = static_cast<std::int64_t>(state.truncation());
      row[7] = number(state.norm());
      row[8] = number(mean_energy(state));
      row[9] = number(r.mean_w);
      row[10] = number(r.mean_p);
      row[11] = number(r.var_w);
      row[12] = number(r.var_p);
      row[13] = number(r.mean_g);
      row[14] = number(r.mean_f);
      row[15] = number(r.saturation_residual);
    } catch (const std::exception& e) {
      row[16] = describe(e);
    }
    return row;
  };

  std::vector<std::vector<Cell>> rows(total);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(c.threads > 0 ? c.threads : hw, total);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < total; i = next++) rows[i] = point_row(i);
      });
  }

  SweepOutput out;
  out.points.columns = sweep_columns();
  out.points.rows = std::move(rows);
  Json& j = out.json;
  j["schema"] = "gencs.sweep/1";
  j["model"] = model_json(c.model);
  j["state"] = state_family_name(c.state);
  j["z"] = complex_or_null(c.z);
  j["lambda"] = complex_or_null(c.lambda);
  Json axes = Json::array();
  for (const SweepAxis& a : c.axes) axes.push_back({{"name", a.name}, {"start", a.start}, {"stop", a.stop}, {"count", a.count}});
  j["axes"] = axes;
  j["tail_tolerance"] = c.tail_tolerance;
  j["spill_tolerance"] = c.spill_tolerance;
  j["points"] = table_json(out.points);
  return out;
}

namespace {

// Raw flag values; applied over the config file after parsing.
struct Flags {
  std::string config;
  std::optional<std::string> model, epsilon, alpha, family, z, lambda, out, format;
  std::optional<std::string> tail_tolerance, spill_tolerance, verify_tolerance, small_epsilon;
  std::optional<int> truncation, n_max, threads;
  std::optional<std::string> suite;
  std::vector<std::string> axes;
  bool exploration = false;
};

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config_file(f.config);
  if (f.model) c.model.family = parse_model_family(*f.model);
  if (f.epsilon) c.model.epsilon = parse_real(*f.epsilon);
  if (f.alpha) c.model.alpha = parse_real(*f.alpha);
  if (f.family) c.state = parse_state_family(*f.family);
  if (f.z) c.z = parse_complex(*f.z);
  if (f.lambda) c.lambda = parse_complex(*f.lambda);
  if (f.out) c.output = *f.out;
  if (f.format) c.format = parse_format(*f.format);
  if (f.tail_tolerance) c.tail_tolerance = parse_real(*f.tail_tolerance);
  if (f.spill_tolerance) c.spill_tolerance = parse_real(*f.spill_tolerance);
  if (f.verify_tolerance) c.verify_tolerance = parse_real(*f.verify_tolerance);
  if (f.small_epsilon) c.small_epsilon = parse_real(*f.small_epsilon);
  if (f.truncation) c.truncation = *f.truncation;
  if (f.n_max) c.n_max = *f.n_max;
  if (f.threads) c.threads = *f.threads;
  if (f.suite) c.suite = *f.suite;
  if (!f.axes.empty()) {
    c.axes.clear();
    for (const std::string& a : f.axes) c.axes.push_back(parse_axis(a));
  }
  if (f.exploration) c.exploration = true;
  validate(c);
  return c;
}

void add_model_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--model", f.model, "Spectrum: harmonic, well or x4 (default well)");
  sub->add_option("--epsilon", f.epsilon, "Quartic coupling for x4; decimal or ratio such as 2/3");
  sub->add_option("--alpha", f.alpha, "Phase parameter alpha");
  sub->add_option("--out", f.out, "Output file (default stdout); run metadata goes to <stem>.run.json");
  sub->add_option("--format", f.format, "csv (default) or json");
}

void add_state_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--family", f.family, "State family: gk, kp or gis");
  sub->add_option("--z", f.z, "Label z as a+bi");
  sub->add_option("--lambda", f.lambda, "Squeezing parameter lambda as a+bi (gis)");
  sub->add_option("--truncation", f.truncation, "Fixed N; 0 picks N adaptively");
  sub->add_flag("--exploration", f.exploration, "Allow Re(lambda) <= 0 with a fixed N (non-normalizable)");
  sub->add_option("--tail-tolerance", f.tail_tolerance, "Largest dropped norm squared (default 1e-16)");
  sub->add_option("--spill-tolerance", f.spill_tolerance, "Largest A+ spill past N for observables (default 1e-12)");
}

struct Emitted {
  std::string data;
  std::vector<std::pair<std::string, std::string>> extra_files;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_now();

  CLI::App app{"Generalized coherent and intelligent states for factorizable spectra"};
  app.require_subcommand(1);
  Flags f;
  CLI::App* build = app.add_subcommand("build", "Build one state and write its coefficients");
  CLI::App* verify = app.add_subcommand("verify", "Run invariant suites and emit a pass/fail table");
  CLI::App* sweep = app.add_subcommand("sweep", "Evaluate observables over a parameter grid");
  CLI::App* limits = app.add_subcommand("limits", "Report the eps = 2/3 and eps -> 0 degeneracies");
  for (CLI::App* sub : {build, verify, sweep, limits}) add_model_flags(sub, f);
  add_state_flags(build, f);
  add_state_flags(sweep, f);
  verify->add_option("--suite", f.suite, "eigenvalue, action, temporal, kp, pi, saturation, closed, degeneracy, "
                                          "analytic, moments, identity, limits or all");
  verify->add_option("--z", f.z, "Use this z instead of the suite's grid");
  verify->add_option("--lambda", f.lambda, "Use this lambda instead of the suite's grid");
  verify->add_option("--n-max", f.n_max, "Highest moment / basis index for measure suites (default 8)");
  verify->add_option("--tolerance", f.verify_tolerance, "Replace every check's tolerance");
  sweep->add_option("--axis", f.axes, "name=start:stop:count; names z_re z_im z_abs z_arg lambda_re lambda_im "
                                      "lambda_abs lambda_arg t; first axis outermost");
  sweep->add_option("--threads", f.threads, "Worker threads (default: hardware concurrency)");
  sweep->footer(
      "Columns: index,z_re,z_im,lambda_re,lambda_im,t,truncation,norm,mean_energy,mean_w,mean_p,var_w,var_p,"
      "mean_g,mean_f,saturation_residual,error. Failed points leave the numeric cells empty and fill error.");
  limits->add_option("--small-epsilon", f.small_epsilon, "Coupling used for the eps -> 0 limit (default 1e-6)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::string command;
  RunConfig config;
  int code = kExitOk;
  Emitted emitted;
  try {
    config = resolve(f);
    const bool json = config.format == OutputFormat::Json;
    if (build->parsed()) {
      command = "build";
      const BuildOutput b = run_build(config);
      if (json) {
        emitted.data = json_text(b.json);
      } else {
        emitted.data = csv_text(b.coefficients);
        if (!config.output.empty()) emitted.extra_files.emplace_back(with_suffix(config.output, ".summary.csv"), csv_text(b.summary));
      }
    } else if (verify->parsed() || limits->parsed()) {
      command = verify->parsed() ? "verify" : "limits";
      const VerifyOutput v = verify->parsed() ? run_verify(config) : run_limits(config);
      emitted.data = json ? json_text(v.json) : csv_text(v.checks);
      std::int64_t failed = 0;
      for (const auto& row : v.checks.rows) failed += std::get<bool>(row[4]) ? 0 : 1;
      err << command << ": " << v.checks.rows.size() << " checks, " << failed << " failed\n";
      if (!v.passed) code = kExitVerifyFailed;
    } else {
      command = "sweep";
      const SweepOutput s = run_sweep(config);
      emitted.data = json ? json_text(s.json) : csv_text(s.points);
    }
  } catch (const std::exception& e) {
    err << "error: " << describe(e) << "\n";
    return exit_code_for(e);
  }

  try {
    if (config.output.empty()) {
      out << emitted.data;
    } else {
      write_file(config.output, emitted.data);
      for (const auto& [path, content] : emitted.extra_files) write_file(path, content);
      Json meta;
      meta["schema"] = "gencs.run/1";
      meta["command"] = command;
      meta["args"] = args;
      meta["config"] = to_json(config);
      meta["exit_code"] = code;
      meta["started_utc"] = started_utc;
      meta["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      meta["hardware_threads"] = std::thread::hardware_concurrency();
      write_file(with_suffix(config.output, ".run.json"), json_text(meta));
    }
  } catch (const std::exception& e) {
    err << "error: " << describe(e) << "\n";
    return kExitConfig;
  }
  return code;
}

}  // namespace gencs::cli
