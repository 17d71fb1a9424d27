#ifndef QDOT_CONFIG_HPP
#define QDOT_CONFIG_HPP

// `key = value` dot configuration files. Blank lines and lines starting with '#' are
// ignored; `inf` is accepted for wz_ratio.

#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "channel.hpp"
#include "model.hpp"

namespace qdot {

struct DotConfig {
  ModelParams params{};
  std::optional<Truncation> trunc{};
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") + 1 - b);
}

inline double parse_real(const std::string& key, const std::string& value) {
  if (value == "inf" || value == "Inf" || value == "INF") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw std::invalid_argument("config: bad number for " + key + ": " + value);
  return v;
}

inline int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_real(key, value);
  if (v != static_cast<int>(v)) throw std::invalid_argument("config: " + key + " must be an integer");
  return static_cast<int>(v);
}

}  // namespace detail

inline Dimension parse_dimension(const std::string& s) {
  if (s == "2d" || s == "2D") return Dimension::TwoD;
  if (s == "3d" || s == "3D") return Dimension::ThreeD;
  throw std::invalid_argument("dimension must be 2d or 3d, got " + s);
}

/// Applies every entry of `in` on top of `base`. Unknown keys are errors.
inline DotConfig read_config(std::istream& in, DotConfig base = {}) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": missing '='");
    kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }
  auto& p = base.params;
  bool dimension_given = false;
  for (const auto& [k, v] : kv) {
    if (k == "lambda") p.lambda = detail::parse_real(k, v);
    else if (k == "wz_ratio") p.wz_ratio = detail::parse_real(k, v);
    else if (k == "g_star") p.g_star = detail::parse_real(k, v);
    else if (k == "mass_ratio") p.mass_ratio = detail::parse_real(k, v);
    else if (k == "hbar_omega0_meV") p.hbar_omega0_meV = detail::parse_real(k, v);
    else if (k == "dimension") {
      p.dimension = parse_dimension(v);
      dimension_given = true;
    } else if (k != "nmax" && k != "nzmax") {
      throw std::invalid_argument("config: unknown key " + k);
    }
  }
  if (!dimension_given && kv.count("wz_ratio"))
    p.dimension = std::isinf(p.wz_ratio) ? Dimension::TwoD : Dimension::ThreeD;
  if (dimension_given && p.dimension == Dimension::TwoD) p.wz_ratio = kInf;
  for (const char* k : {"nmax", "nzmax"}) {
    const auto it = kv.find(k);
    if (it == kv.end()) continue;
    if (!base.trunc) base.trunc = Truncation::defaults(p.dimension);
    (it->first == "nmax" ? base.trunc->nmax : base.trunc->nzmax) = detail::parse_int(it->first, it->second);
  }
  p.validate();
  return base;
}

inline DotConfig load_config_file(const std::string& path, DotConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  return read_config(in, std::move(base));
}

/// Explicit path, else $QDOT_CONFIG, else ./dot.cfg when present, else defaults.
inline DotConfig resolve_config(const std::optional<std::string>& path) {
  if (path) return load_config_file(*path);
  if (const char* env = std::getenv("QDOT_CONFIG"); env && *env) return load_config_file(env);
  if (std::ifstream probe("dot.cfg"); probe) return read_config(probe);
  return {};
}

}  // namespace qdot

#endif  // QDOT_CONFIG_HPP
