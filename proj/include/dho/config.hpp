#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>

#include "dho/discretize.hpp"
#include "dho/errors.hpp"
#include "dho/grid.hpp"
#include "dho/params.hpp"
#include "dho/rational.hpp"
#include "dho/weyl.hpp"

namespace dho {

// Run configuration: flat UTF-8 key=value lines, '#' comments, later keys
// override earlier ones. Numeric values are parsed as exact rationals
// (decimals become exact decimal fractions) so the same config drives the
// symbolic and the floating-point sides consistently. Defaults match the
// standard verification parameters.
struct RunConfig {
  Rational m{1};
  Rational hbar{1};
  Rational omega{1};
  Rational lambda{1, 2};
  Rational grid_l{10};
  int grid_n = 1200;
  MatrixForm form = MatrixForm::EQ5;
  int levels = 8;
  Rational dt{1, 1000};
  int steps = 5000;
  std::string out_dir = ".";
  bool json_to_stdout = false;
  std::string dump_matrix_path;  // spectrum only; empty disables

  PhysParams phys() const {
    PhysParams p;
    p.m = m.to_double();
    p.omega = omega.to_double();
    p.lambda = lambda.to_double();
    p.hbar = hbar.to_double();
    return p;
  }

  SymbolicParams symbolic() const {
    SymbolicParams s;
    s.m = m;
    s.omega = omega;
    s.lambda = lambda;
    s.hbar = hbar;
    return s;
  }

  Grid grid() const { return make_grid(grid_l.to_double(), grid_n); }

  void validate() const {
    try {
      phys().validate();
      symbolic().validate();
      (void)grid();
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    if (levels < 1 || levels > 12) throw ConfigError("levels must be in 1..12");
    if (!(Rational(0) < dt)) throw ConfigError("dt must be positive");
    if (steps < 1) throw ConfigError("steps must be positive");
  }
};

inline MatrixForm parse_form(std::string_view text) {
  if (text == "eq2" || text == "EQ2") return MatrixForm::EQ2;
  if (text == "eq5" || text == "EQ5") return MatrixForm::EQ5;
  throw ConfigError("form must be eq2 or eq5, got '" + std::string(text) + "'");
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for '" + key + "': '" + value + "'");
  }
}

inline Rational parse_rational_value(const std::string& key, const std::string& value) {
  try {
    return Rational::parse(value);
  } catch (const std::exception&) {
    throw ConfigError("bad number for '" + key + "': '" + value + "'");
  }
}

}  // namespace detail

inline void apply_config_line(RunConfig& config, const std::string& key,
                              const std::string& value) {
  if (key == "m")
    config.m = detail::parse_rational_value(key, value);
  else if (key == "hbar")
    config.hbar = detail::parse_rational_value(key, value);
  else if (key == "omega")
    config.omega = detail::parse_rational_value(key, value);
  else if (key == "lambda")
    config.lambda = detail::parse_rational_value(key, value);
  else if (key == "L")
    config.grid_l = detail::parse_rational_value(key, value);
  else if (key == "N")
    config.grid_n = detail::parse_int(key, value);
  else if (key == "form")
    config.form = parse_form(value);
  else if (key == "levels")
    config.levels = detail::parse_int(key, value);
  else if (key == "dt")
    config.dt = detail::parse_rational_value(key, value);
  else if (key == "steps")
    config.steps = detail::parse_int(key, value);
  else if (key == "out")
    config.out_dir = value;
  else
    throw ConfigError("unknown config key '" + key + "'");
}

inline RunConfig parse_config(std::istream& in, RunConfig base = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = detail::trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    apply_config_line(base, key, value);
  }
  return base;
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

}  // namespace dho
