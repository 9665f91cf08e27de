#include "qcosym/cli/config.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace qcosym::cli {

json parse_config(const std::string& text) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    require_keys(j, {"model", "integrator", "time", "initial", "validate_hj", "simulate", "reduce",
                     "linearize", "characteristics", "check_structure"},
                 "top level");
    for (const auto& [k, v] : j.items())
      if (!v.is_object()) throw ConfigError("section '" + k + "' must be an object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError("unknown key '" + k + "' in " + where);
}

json section(const json& root, const std::string& name) {
  return root.contains(name) ? root.at(name) : json::object();
}

namespace {

double as_double(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

}  // namespace

double get_double(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing " + where + "." + key);
  return as_double(obj.at(key), where + "." + key);
}

double get_double(const json& obj, const std::string& key, const std::string& where,
                  double fallback) {
  return obj.contains(key) ? as_double(obj.at(key), where + "." + key) : fallback;
}

std::size_t get_size(const json& obj, const std::string& key, const std::string& where,
                     std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& where, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ConfigError(where + "." + key + " must be true or false");
  return obj.at(key).get<bool>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& where,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
  return obj.at(key).get<std::string>();
}

std::vector<double> get_vector(const json& obj, const std::string& key, const std::string& where,
                               std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_double(e, where + "." + key + "[]"));
  return out;
}

Matrix get_matrix(const json& obj, const std::string& key, const std::string& where,
                  Matrix fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  const std::string what = where + "." + key;
  if (!v.is_array() || v.empty()) throw ConfigError(what + " must be an array of rows");
  const std::size_t rows = v.size();
  const std::size_t cols = v.front().is_array() ? v.front().size() : 0;
  Matrix M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) throw ConfigError(what + " rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j) M(i, j) = as_double(v[i][j], what);
  }
  return M;
}

fhn::SlowCoefficient parse_coefficient(const json& v, const std::string& where) {
  if (v.is_number()) return fhn::SlowCoefficient(v.get<double>());
  require_keys(v, {"form", "k"}, where);
  const std::string form = get_string(v, "form", where, "constant");
  const auto k = get_vector(v, "k", where, {});
  auto need = [&](std::size_t n) {
    if (k.size() != n)
      throw ConfigError(where + ".k needs " + std::to_string(n) + " values for form '" + form + "'");
  };
  if (form == "constant") {
    need(1);
    return fhn::SlowCoefficient(k[0]);
  }
  if (form == "linear") {
    need(2);
    return fhn::SlowCoefficient::linear(k[0], k[1]);
  }
  if (form == "sine") {
    need(4);
    return fhn::SlowCoefficient::sine(k[0], k[1], k[2], k[3]);
  }
  if (form == "exponential") {
    need(3);
    return fhn::SlowCoefficient::exponential(k[0], k[1], k[2]);
  }
  throw ConfigError(where + ".form must be constant, linear, sine or exponential");
}

fhn::FhnParams parse_model(const json& model) {
  require_keys(model, {"eps", "delta", "a", "b", "c"}, "model");
  fhn::FhnParams p;
  p.eps = get_double(model, "eps", "model", p.eps);
  p.delta = get_double(model, "delta", "model", p.delta);
  p.a = get_double(model, "a", "model", p.a);
  if (model.contains("b")) p.b = parse_coefficient(model.at("b"), "model.b");
  if (model.contains("c")) p.c = parse_coefficient(model.at("c"), "model.c");
  p.validate();
  return p;
}

IntegratorConfig parse_integrator(const json& integ) {
  require_keys(integ, {"rel_tol", "abs_tol", "max_steps", "initial_step", "max_step"}, "integrator");
  IntegratorConfig c;
  c.rel_tol = get_double(integ, "rel_tol", "integrator", c.rel_tol);
  c.abs_tol = get_double(integ, "abs_tol", "integrator", c.abs_tol);
  c.max_steps = get_size(integ, "max_steps", "integrator", c.max_steps);
  if (integ.contains("initial_step")) c.initial_step = get_double(integ, "initial_step", "integrator");
  if (integ.contains("max_step")) c.max_step = get_double(integ, "max_step", "integrator");
  c.validate();
  return c;
}

TimeSpan parse_time(const json& time) {
  require_keys(time, {"t0", "t1", "samples"}, "time");
  TimeSpan s;
  s.t0 = get_double(time, "t0", "time", s.t0);
  s.t1 = get_double(time, "t1", "time", s.t1);
  s.samples = get_size(time, "samples", "time", s.samples);
  if (!(s.t1 > s.t0)) throw ConfigError("time.t1 must exceed time.t0");
  if (s.samples == 1) throw ConfigError("time.samples must be 0 or at least 2");
  return s;
}

std::vector<double> TimeSpan::outputs() const {
  return samples == 0 ? std::vector<double>{} : linspace(t0, t1, samples);
}

}  // namespace qcosym::cli
