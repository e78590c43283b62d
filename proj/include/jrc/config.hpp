// SPDX-License-Identifier: Apache-2.0
//
// Flat key = value experiment configuration. Lines are `key = value`, blank
// lines and '#' comments are ignored, lists are comma separated. Every
// validation failure names the offending key and happens before any
// computation starts.

#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jrc/types.hpp"

namespace jrc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

} // namespace detail

class Config {
 public:
  static Config from_stream(std::istream& in) {
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": expected key = value");
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string val = detail::trim(line.substr(eq + 1));
      if (key.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
      cfg.kv_[key] = val;
    }
    return cfg;
  }

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    return from_stream(in);
  }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
  }

  double get_real(const std::string& key, double dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    return parse_real(key, it->second);
  }

  long get_int(const std::string& key, long dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    try {
      std::size_t pos = 0;
      const long v = std::stol(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': not an integer: " + it->second);
    }
  }

  std::vector<double> get_real_list(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return {};
    std::vector<double> out;
    for (const auto& tok : detail::split_list(it->second))
      out.push_back(parse_real(key, tok));
    return out;
  }

  std::vector<std::string> get_string_list(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return {};
    return detail::split_list(it->second);
  }

 private:
  static double parse_real(const std::string& key, const std::string& tok) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': not a number: " + tok);
    }
  }

  std::map<std::string, std::string> kv_;
};

inline Method parse_method(const std::string& name) {
  if (name == "proposed") return Method::proposed;
  if (name == "no_interference") return Method::no_interference;
  if (name == "with_interference") return Method::with_interference;
  if (name == "svd_nulling") return Method::svd_nulling;
  if (name == "beamspace_nulling") return Method::beamspace_nulling;
  throw ConfigError("unknown method tag: " + name);
}

inline SweepAxis parse_axis(const std::string& name) {
  if (name == "snr_db") return SweepAxis::snr_db;
  if (name == "n_antennas") return SweepAxis::n_antennas;
  if (name == "rho") return SweepAxis::rho;
  throw ConfigError("unknown sweep axis: " + name);
}

/// Builds the base scenario from a config; shared by both subcommands.
inline Scenario scenario_from_config(const Config& cfg) {
  Scenario sc;
  sc.n_antennas = static_cast<int>(cfg.get_int("n_antennas", sc.n_antennas));
  sc.n_users = static_cast<int>(cfg.get_int("n_users", sc.n_users));
  sc.n_targets = static_cast<int>(cfg.get_int("n_targets", sc.n_targets));
  sc.rho = cfg.get_real("rho", sc.rho);
  sc.snr_db = cfg.get_real("snr_db", sc.snr_db);
  sc.spacing = cfg.get_real("spacing", sc.spacing);
  const auto range = cfg.get_real_list("angle_range");
  if (!range.empty()) {
    if (range.size() != 2)
      throw ConfigError("config key 'angle_range': expected two values lo,hi");
    sc.angle_lo_deg = range[0];
    sc.angle_hi_deg = range[1];
  }
  sc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long>(sc.seed)));
  sc.trials = static_cast<int>(cfg.get_int("trials", sc.trials));

  if (sc.n_antennas < 2) throw ConfigError("config key 'n_antennas': must be >= 2");
  if (sc.n_users < 0) throw ConfigError("config key 'n_users': must be >= 0");
  if (sc.n_targets < 0) throw ConfigError("config key 'n_targets': must be >= 0");
  if (!(sc.rho >= 0.0 && sc.rho <= 1.0))
    throw ConfigError("config key 'rho': must be in [0,1]");
  if (!(sc.angle_hi_deg > sc.angle_lo_deg))
    throw ConfigError("config key 'angle_range': requires lo < hi");
  if (sc.trials < 1) throw ConfigError("config key 'trials': must be >= 1");
  if (!(sc.spacing > 0.0)) throw ConfigError("config key 'spacing': must be > 0");
  return sc;
}

/// Builds a validated sweep specification. The swept values come from
/// snr_db_list / n_antennas_list / rho_list according to the axis.
inline SweepSpec sweep_spec_from_config(const Config& cfg) {
  SweepSpec spec;
  spec.scenario = scenario_from_config(cfg);
  spec.trials = spec.scenario.trials;
  spec.axis = parse_axis(cfg.get_string("axis", "snr_db"));

  const char* list_key = spec.axis == SweepAxis::snr_db      ? "snr_db_list"
                         : spec.axis == SweepAxis::n_antennas ? "n_antennas_list"
                                                              : "rho_list";
  spec.values = cfg.get_real_list(list_key);
  if (spec.values.empty() && spec.axis == SweepAxis::snr_db)
    spec.values = {-10, -5, 0, 5, 10, 15, 20};
  if (spec.values.empty())
    throw ConfigError(std::string("config key '") + list_key +
                      "': required for axis " + axis_name(spec.axis));
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    if (!(spec.values[i] > spec.values[i - 1]))
      throw ConfigError(std::string("config key '") + list_key +
                        "': values must be strictly increasing");
  if (spec.axis == SweepAxis::n_antennas)
    for (double v : spec.values)
      if (v < 2 || v != std::floor(v))
        throw ConfigError("config key 'n_antennas_list': integer values >= 2");
  if (spec.axis == SweepAxis::rho)
    for (double v : spec.values)
      if (!(v >= 0.0 && v <= 1.0))
        throw ConfigError("config key 'rho_list': values must be in [0,1]");

  auto names = cfg.get_string_list("methods");
  if (names.empty())
    names = {"proposed", "no_interference", "with_interference", "svd_nulling",
             "beamspace_nulling"};
  for (const auto& nm : names) spec.methods.push_back(parse_method(nm));
  spec.output_path = cfg.get_string("output", "");
  return spec;
}

/// JRC_SEED environment variable overrides the config seed when set.
inline void apply_seed_env(Scenario& sc) {
  if (const char* env = std::getenv("JRC_SEED")) {
    try {
      sc.seed = static_cast<std::uint64_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw ConfigError(std::string("JRC_SEED: not an integer: ") + env);
    }
  }
}

} // namespace jrc
