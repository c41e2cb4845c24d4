#include "drcbf/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace drcbf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Strip a # comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& s, int line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config line " + std::to_string(line_no) +
                      ": bad number '" + s + "'");
  }
}

Config::Value parse_value(const std::string& raw, int line_no) {
  if (raw.empty())
    throw ConfigError("config line " + std::to_string(line_no) + ": empty value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unterminated string");
    return raw.substr(1, raw.size() - 2);
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '[') {
    if (raw.back() != ']')
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unterminated array");
    std::vector<double> arr;
    std::string body = raw.substr(1, raw.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      arr.push_back(parse_number(item, line_no));
    }
    return arr;
  }
  return parse_number(raw, line_no);
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    cfg.values_[full] = parse_value(trim(line.substr(eq + 1)), line_no);
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse(in);
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* v = std::get_if<double>(&it->second)) return *v;
  throw ConfigError("config key '" + key + "' is not a number");
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* v = std::get_if<bool>(&it->second)) return *v;
  throw ConfigError("config key '" + key + "' is not a boolean");
}

std::string Config::get_string(const std::string& key,
                               std::string fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
  throw ConfigError("config key '" + key + "' is not a string");
}

std::vector<double> Config::get_array(const std::string& key,
                                      int expected_size) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError("missing config array '" + key + "'");
  const auto* v = std::get_if<std::vector<double>>(&it->second);
  if (v == nullptr) throw ConfigError("config key '" + key + "' is not an array");
  if (expected_size >= 0 && static_cast<int>(v->size()) != expected_size)
    throw ConfigError("config array '" + key + "' must have " +
                      std::to_string(expected_size) + " entries");
  return *v;
}

namespace {

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

BoxSet box_override(const Config& cfg, const std::string& lo_key,
                    const std::string& hi_key, const BoxSet& fallback,
                    int dim) {
  if (!cfg.has(lo_key) && !cfg.has(hi_key)) return fallback;
  if (!cfg.has(lo_key) || !cfg.has(hi_key))
    throw ConfigError("both '" + lo_key + "' and '" + hi_key +
                      "' must be given together");
  return BoxSet(to_vec(cfg.get_array(lo_key, dim)),
                to_vec(cfg.get_array(hi_key, dim)));
}

ClassK classk_override(const Config& cfg, const std::string& prefix,
                       const ClassK& fallback) {
  ClassK a = fallback;
  const std::string form = cfg.get_string(prefix + "_form", "");
  if (form == "linear")
    a.form = ClassK::Form::Linear;
  else if (form == "power")
    a.form = ClassK::Form::Power;
  else if (!form.empty())
    throw ConfigError("unknown class-K form '" + form + "'");
  a.p = cfg.get_double(prefix + "_gain", a.p);
  a.q = cfg.get_double(prefix + "_exponent", a.q);
  a.validate();
  return a;
}

}  // namespace

Scenario scenario_from_config(const Config& cfg) {
  Scenario sc = Scenario::paper_default();

  sc.system_id = cfg.get_string("dynamics.system", sc.system_id);
  sc.domain = box_override(cfg, "dynamics.domain_lo", "dynamics.domain_hi",
                           sc.domain, 4);
  sc.substeps_per_period = static_cast<int>(cfg.get_double(
      "dynamics.substeps_per_period", sc.substeps_per_period));
  sc.disturbance_draws_per_period =
      static_cast<int>(cfg.get_double("dynamics.disturbance_draws_per_period",
                                      sc.disturbance_draws_per_period));

  if (cfg.has("barrier.obstacle")) {
    const auto o = cfg.get_array("barrier.obstacle", 2);
    sc.obstacle.x = o[0];
    sc.obstacle.y = o[1];
  }
  sc.obstacle.safe_distance =
      cfg.get_double("barrier.safe_distance", sc.obstacle.safe_distance);
  sc.alpha1 = classk_override(cfg, "barrier.alpha1", sc.alpha1);
  sc.alpha2 = classk_override(cfg, "barrier.alpha2", sc.alpha2);

  const BoxSet dist = box_override(cfg, "uncertainty.dist_lo",
                                   "uncertainty.dist_hi",
                                   sc.uncertainty.dist_box, 2);
  const BoxSet meas = box_override(cfg, "uncertainty.meas_lo",
                                   "uncertainty.meas_hi",
                                   sc.uncertainty.meas_box, 4);
  sc.uncertainty = UncertaintyModel::from_boxes(dist, meas);

  sc.input_box =
      box_override(cfg, "filter.input_lo", "filter.input_hi", sc.input_box, 2);
  if (cfg.has("filter.kind"))
    sc.filter = filter_kind_from_string(cfg.get_string("filter.kind", ""));
  sc.reach_substeps =
      static_cast<int>(cfg.get_double("filter.reach_substeps", sc.reach_substeps));
  sc.reach_endpoint_only =
      cfg.get_bool("filter.reach_endpoint_only", sc.reach_endpoint_only);

  sc.constant_samples =
      static_cast<int>(cfg.get_double("margins.samples", sc.constant_samples));
  sc.safety_factor = cfg.get_double("margins.safety_factor", sc.safety_factor);
  sc.constants_seed = static_cast<std::uint64_t>(
      cfg.get_double("margins.seed", static_cast<double>(sc.constants_seed)));

  if (cfg.has("scenario.start")) sc.start = to_vec(cfg.get_array("scenario.start", 4));
  if (cfg.has("scenario.goal")) {
    const auto g = cfg.get_array("scenario.goal", 2);
    sc.goal << g[0], g[1];
  }
  sc.T = cfg.get_double("scenario.T", sc.T);
  sc.horizon = cfg.get_double("scenario.horizon", sc.horizon);
  sc.seed = static_cast<std::uint64_t>(
      cfg.get_double("scenario.seed", static_cast<double>(sc.seed)));

  sc.gains.k_theta = cfg.get_double("controller.k_theta", sc.gains.k_theta);
  sc.gains.k_v = cfg.get_double("controller.k_v", sc.gains.k_v);
  sc.gains.v_max = cfg.get_double("controller.v_max", sc.gains.v_max);
  sc.gains.k_d = cfg.get_double("controller.k_d", sc.gains.k_d);

  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  return sc;
}

}  // namespace drcbf
