#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace gencs::cli {

namespace {

double parse_double_exact(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last)
    throw ConfigError("cannot parse " + what + " '" + text + "'");
  return value;
}

cplx json_complex(const nlohmann::ordered_json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError("'" + key + "' must be an object {\"re\": x, \"im\": y}");
  for (const auto& [k, v] : j.items())
    if (k != "re" && k != "im") throw ConfigError("'" + key + "' has unknown field '" + k + "'");
  auto part = [&](const char* name) {
    if (!j.contains(name)) return 0.0;
    if (!j.at(name).is_number()) throw ConfigError("'" + key + "." + name + "' must be a number");
    return j.at(name).get<double>();
  };
  return {part("re"), part("im")};
}

nlohmann::ordered_json complex_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

template <typename T>
T get_as(const nlohmann::ordered_json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::ordered_json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

double get_number(const nlohmann::ordered_json& j, const std::string& key) {
  if (j.is_string()) return parse_real(j.get<std::string>());
  if (!j.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return j.get<double>();
}

}  // namespace

SpectrumModel ModelConfig::make() const {
  switch (family) {
    case Family::Harmonic:
      return SpectrumModel::harmonic(alpha);
    case Family::InfiniteWell:
      return SpectrumModel::infinite_well(alpha);
    case Family::AnharmonicX4:
      break;
  }
  return SpectrumModel::anharmonic(epsilon, alpha);
}

double SweepAxis::value(int i) const {
  if (count <= 1) return start;
  if (i == count - 1) return stop;
  return start + (stop - start) * (static_cast<double>(i) / (count - 1));
}

cplx parse_complex(const std::string& raw) {
  std::string text;
  std::copy_if(raw.begin(), raw.end(), std::back_inserter(text), [](char c) { return c != ' '; });
  if (text.empty()) throw ConfigError("empty complex number");
  if (text.back() != 'i') return {parse_double_exact(text, "complex number"), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  // The imaginary part starts at the last sign that is not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re_text = split == std::string::npos ? "" : body.substr(0, split);
  std::string im_text = split == std::string::npos ? body : body.substr(split);
  if (im_text.empty() || im_text == "+") im_text = "1";
  if (im_text == "-") im_text = "-1";
  const double re = re_text.empty() ? 0.0 : parse_double_exact(re_text, "real part");
  return {re, parse_double_exact(im_text, "imaginary part")};
}

std::string format_complex(cplx value) {
  char re[32], im[32];
  auto r1 = std::to_chars(re, re + sizeof re, value.real());
  auto r2 = std::to_chars(im, im + sizeof im, value.imag());
  std::string out(re, r1.ptr);
  std::string imag(im, r2.ptr);
  if (imag.front() != '-') out += '+';
  return out + imag + 'i';
}

double parse_real(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_double_exact(text, "number");
  const double num = parse_double_exact(text.substr(0, slash), "numerator");
  const double den = parse_double_exact(text.substr(slash + 1), "denominator");
  if (den == 0.0) throw ConfigError("zero denominator in '" + text + "'");
  return num / den;
}

Family parse_model_family(const std::string& text) {
  if (text == "harmonic") return Family::Harmonic;
  if (text == "well") return Family::InfiniteWell;
  if (text == "x4") return Family::AnharmonicX4;
  throw ConfigError("unknown model '" + text + "' (expected harmonic, well or x4)");
}

std::string model_family_name(Family family) {
  switch (family) {
    case Family::Harmonic:
      return "harmonic";
    case Family::InfiniteWell:
      return "well";
    case Family::AnharmonicX4:
      break;
  }
  return "x4";
}

StateFamily parse_state_family(const std::string& text) {
  if (text == "gk") return StateFamily::Gk;
  if (text == "kp") return StateFamily::Kp;
  if (text == "gis") return StateFamily::Gis;
  throw ConfigError("unknown state family '" + text + "' (expected gk, kp or gis)");
}

std::string state_family_name(StateFamily family) {
  switch (family) {
    case StateFamily::Gk:
      return "gk";
    case StateFamily::Kp:
      return "kp";
    case StateFamily::Gis:
      break;
  }
  return "gis";
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ConfigError("unknown format '" + text + "' (expected csv or json)");
}

std::string format_name(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

const std::vector<std::string>& axis_names() {
  static const std::vector<std::string> names = {"z_re",       "z_im",      "z_abs",      "z_arg", "lambda_re",
                                                 "lambda_im", "lambda_abs", "lambda_arg", "t"};
  return names;
}

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("axis '" + text + "' is not name=start:stop:count");
  SweepAxis axis;
  axis.name = text.substr(0, eq);
  const auto& names = axis_names();
  if (std::find(names.begin(), names.end(), axis.name) == names.end())
    throw ConfigError("unknown sweep axis '" + axis.name + "'");
  const std::string range = text.substr(eq + 1);
  const auto c1 = range.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : range.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ConfigError("axis '" + text + "' is not name=start:stop:count");
  axis.start = parse_real(range.substr(0, c1));
  axis.stop = parse_real(range.substr(c1 + 1, c2 - c1 - 1));
  const double count = parse_double_exact(range.substr(c2 + 1), "axis count");
  if (count != std::floor(count) || count < 1 || count > 1e5) throw ConfigError("axis count must be an integer in [1, 1e5]");
  axis.count = static_cast<int>(count);
  return axis;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["model"] = {{"family", model_family_name(c.model.family)}, {"epsilon", c.model.epsilon}, {"alpha", c.model.alpha}};
  j["state"] = state_family_name(c.state);
  j["z"] = c.z ? complex_json(*c.z) : nlohmann::ordered_json(nullptr);
  j["lambda"] = c.lambda ? complex_json(*c.lambda) : nlohmann::ordered_json(nullptr);
  j["truncation"] = c.truncation;
  j["exploration"] = c.exploration;
  j["tail_tolerance"] = c.tail_tolerance;
  j["spill_tolerance"] = c.spill_tolerance;
  j["verify_tolerance"] = c.verify_tolerance ? nlohmann::ordered_json(*c.verify_tolerance) : nlohmann::ordered_json(nullptr);
  j["suite"] = c.suite;
  j["n_max"] = c.n_max;
  j["small_epsilon"] = c.small_epsilon;
  nlohmann::ordered_json axes = nlohmann::ordered_json::array();
  for (const SweepAxis& a : c.axes)
    axes.push_back({{"name", a.name}, {"start", a.start}, {"stop", a.stop}, {"count", a.count}});
  j["axes"] = axes;
  j["threads"] = c.threads;
  j["output"] = c.output;
  j["format"] = format_name(c.format);
  return j;
}

RunConfig from_json(const nlohmann::ordered_json& j, RunConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "model") {
      if (!v.is_object()) throw ConfigError("'model' must be an object");
      for (const auto& [mk, mv] : v.items()) {
        if (mk == "family") c.model.family = parse_model_family(get_as<std::string>(mv, "model.family"));
        else if (mk == "epsilon") c.model.epsilon = get_number(mv, "model.epsilon");
        else if (mk == "alpha") c.model.alpha = get_number(mv, "model.alpha");
        else throw ConfigError("unknown config key 'model." + mk + "'");
      }
    } else if (key == "state") {
      c.state = parse_state_family(get_as<std::string>(v, key));
    } else if (key == "z") {
      c.z = v.is_null() ? std::nullopt : std::optional<cplx>(v.is_string() ? parse_complex(v.get<std::string>()) : json_complex(v, key));
    } else if (key == "lambda") {
      c.lambda = v.is_null() ? std::nullopt
                             : std::optional<cplx>(v.is_string() ? parse_complex(v.get<std::string>()) : json_complex(v, key));
    } else if (key == "truncation") {
      c.truncation = get_as<int>(v, key);
    } else if (key == "exploration") {
      c.exploration = get_as<bool>(v, key);
    } else if (key == "tail_tolerance") {
      c.tail_tolerance = get_number(v, key);
    } else if (key == "spill_tolerance") {
      c.spill_tolerance = get_number(v, key);
    } else if (key == "verify_tolerance") {
      c.verify_tolerance = v.is_null() ? std::nullopt : std::optional<double>(get_number(v, key));
    } else if (key == "suite") {
      c.suite = get_as<std::string>(v, key);
    } else if (key == "n_max") {
      c.n_max = get_as<int>(v, key);
    } else if (key == "small_epsilon") {
      c.small_epsilon = get_number(v, key);
    } else if (key == "axes") {
      if (!v.is_array()) throw ConfigError("'axes' must be an array");
      c.axes.clear();
      for (const auto& a : v) {
        if (a.is_string()) {
          c.axes.push_back(parse_axis(a.get<std::string>()));
          continue;
        }
        if (!a.is_object()) throw ConfigError("each axis must be an object or a 'name=start:stop:count' string");
        SweepAxis axis;
        for (const auto& [ak, av] : a.items()) {
          if (ak == "name") axis.name = get_as<std::string>(av, "axes.name");
          else if (ak == "start") axis.start = get_number(av, "axes.start");
          else if (ak == "stop") axis.stop = get_number(av, "axes.stop");
          else if (ak == "count") axis.count = get_as<int>(av, "axes.count");
          else throw ConfigError("unknown config key 'axes." + ak + "'");
        }
        c.axes.push_back(axis);
      }
    } else if (key == "threads") {
      c.threads = get_as<int>(v, key);
    } else if (key == "output") {
      c.output = get_as<std::string>(v, key);
    } else if (key == "format") {
      c.format = parse_format(get_as<std::string>(v, key));
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::ordered_json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void validate(const RunConfig& c) {
  if (c.model.family == Family::AnharmonicX4 && !(c.model.epsilon > 0.0 && std::isfinite(c.model.epsilon)))
    throw ConfigError("x4 model needs a finite epsilon > 0");
  if (!std::isfinite(c.model.alpha)) throw ConfigError("alpha must be finite");
  if (c.lambda && *c.lambda == cplx{-1.0, 0.0})
    throw ConfigError(
        "lambda = -1 is excluded: the eigenvalue equation loses its A- term and has no normalizable "
        "analytic solution");
  for (const auto& v : {c.z, c.lambda})
    if (v && !(std::isfinite(v->real()) && std::isfinite(v->imag()))) throw ConfigError("z and lambda must be finite");
  if (c.truncation < 0) throw ConfigError("truncation must be >= 0 (0 is adaptive)");
  for (double tol : {c.tail_tolerance, c.spill_tolerance})
    if (!(tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (c.verify_tolerance && !(*c.verify_tolerance >= 0.0)) throw ConfigError("verify_tolerance must be >= 0");
  if (c.n_max < 1 || c.n_max > 40) throw ConfigError("n_max must lie in [1, 40]");
  if (!(c.small_epsilon > 0.0 && c.small_epsilon < 1.0)) throw ConfigError("small_epsilon must lie in (0, 1)");
  if (c.threads < 0) throw ConfigError("threads must be >= 0");

  std::set<std::string> seen;
  double points = 1.0;
  for (const SweepAxis& a : c.axes) {
    if (std::find(axis_names().begin(), axis_names().end(), a.name) == axis_names().end())
      throw ConfigError("unknown sweep axis '" + a.name + "'");
    if (!seen.insert(a.name).second) throw ConfigError("sweep axis '" + a.name + "' given twice");
    if (a.count < 1) throw ConfigError("sweep axis count must be >= 1");
    if (!std::isfinite(a.start) || !std::isfinite(a.stop)) throw ConfigError("sweep axis bounds must be finite");
    points *= a.count;
  }
  for (const std::string p : {"z", "lambda"}) {
    const bool cart = seen.count(p + "_re") || seen.count(p + "_im");
    const bool polar = seen.count(p + "_abs") || seen.count(p + "_arg");
    if (cart && polar) throw ConfigError("sweep mixes cartesian and polar axes for " + p);
  }
  if (points > 1e5) throw ConfigError("sweep grid exceeds 1e5 points");
}

}  // namespace gencs::cli
