#pragma once

// JSON run configuration. Top-level sections are "model", "integrator",
// "time", "initial" and one section named after the command (with '-'
// replaced by '_'). Unknown keys anywhere are an error. See README.md for
// the schema.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcosym/errors.hpp"
#include "qcosym/fhn.hpp"
#include "qcosym/linalg.hpp"
#include "qcosym/ode.hpp"

namespace qcosym::cli {

using nlohmann::json;

class ConfigError : public Error {
 public:
  using Error::Error;
};

json load_config(const std::string& path);
json parse_config(const std::string& text);

/// Throws ConfigError naming the first key of `obj` not in `allowed`.
void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where);

/// Typed lookups; `where` is the section name used in error messages.
double get_double(const json& obj, const std::string& key, const std::string& where);
double get_double(const json& obj, const std::string& key, const std::string& where,
                  double fallback);
std::size_t get_size(const json& obj, const std::string& key, const std::string& where,
                     std::size_t fallback);
bool get_bool(const json& obj, const std::string& key, const std::string& where, bool fallback);
std::string get_string(const json& obj, const std::string& key, const std::string& where,
                       const std::string& fallback);
std::vector<double> get_vector(const json& obj, const std::string& key, const std::string& where,
                               std::vector<double> fallback);
Matrix get_matrix(const json& obj, const std::string& key, const std::string& where,
                  Matrix fallback);

/// Section `name` of `root`, or an empty object when absent.
json section(const json& root, const std::string& name);

/// "b": 0.8 or "b": {"form": "sine", "k": [k0, amp, omega, phase]}.
fhn::SlowCoefficient parse_coefficient(const json& v, const std::string& where);
fhn::FhnParams parse_model(const json& model);
IntegratorConfig parse_integrator(const json& integ);

struct TimeSpan {
  double t0 = 0.0;
  double t1 = 1.0;
  std::size_t samples = 0;  // 0: every accepted step

  std::vector<double> outputs() const;
};

TimeSpan parse_time(const json& time);

}  // namespace qcosym::cli
