#pragma once

#include <istream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "drcbf/harness.hpp"

namespace drcbf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat structured-text configuration: [section] headers, key = value pairs,
/// `#` comments. Values are numbers, booleans, quoted strings or arrays of
/// numbers — the TOML subset the scenario files use. Keys are addressed as
/// "section.key".
class Config {
 public:
  using Value = std::variant<double, bool, std::string, std::vector<double>>;

  static Config parse(std::istream& in);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, std::string fallback) const;
  std::vector<double> get_array(const std::string& key, int expected_size) const;

  void set(const std::string& key, Value v) { values_[key] = std::move(v); }

 private:
  std::map<std::string, Value> values_;
};

/// Build a scenario from a config, starting from the published defaults; any
/// key present overrides the default.
Scenario scenario_from_config(const Config& cfg);

}  // namespace drcbf
