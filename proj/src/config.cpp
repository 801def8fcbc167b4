#include "rotbec/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rotbec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Shortest decimal that parses back to the same double.
std::string format_shortest(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::stod(buf) == v) return buf;
  }
  return buf;
}

bool numeric_key(const std::string& key) {
  // Keys whose values are normalized through double parsing on emit.
  return key.rfind("domain.", 0) == 0 || key.rfind("time.", 0) == 0 ||
         key.rfind("physics.", 0) == 0 || key.rfind("beta.", 0) == 0 ||
         key.rfind("trap.", 0) == 0 || key == "converge.coarsest_dt" ||
         key == "converge.ref_dt" || key == "converge.T_end";
}

}  // namespace

const std::vector<std::string>& Config::schema() {
  static const std::vector<std::string> keys = {
      "dim",
      "domain.a", "domain.b", "domain.c", "domain.e", "domain.f", "domain.g",
      "grid.J", "grid.K", "grid.L",
      "time.dt", "time.T_end",
      "physics.omega", "physics.lambda",
      "beta.11", "beta.12", "beta.22",
      "trap.1.gamma_x", "trap.1.gamma_y", "trap.1.gamma_z",
      "trap.2.gamma_x", "trap.2.gamma_y", "trap.2.gamma_z",
      "init", "init.renormalize",
      "output.timeseries", "output.sample_every", "output.frames", "output.frame_prefix",
      "converge.levels", "converge.coarsest_dt", "converge.ref_dt",
      "converge.coarsest_J", "converge.ref_J", "converge.T_end",
  };
  return keys;
}

Config Config::parse_text(const std::string& text) {
  std::map<std::string, std::string> raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    if (raw.count(key))
      throw ConfigError("config: duplicate key `" + key + "`");
    raw[key] = value;
  }

  Config cfg;
  const auto preset_it = raw.find("preset");
  if (preset_it != raw.end()) {
    cfg = preset_config(preset_it->second);
    raw.erase(preset_it);
  }
  const auto& known = schema();
  for (const auto& [key, value] : raw) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("config: unknown key `" + key + "`");
    cfg.kv_[key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_text(text.str());
}

std::string Config::emit() const {
  std::ostringstream out;
  for (const auto& key : schema()) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) continue;
    std::string value = it->second;
    if (numeric_key(key)) {
      try {
        value = format_shortest(std::stod(value));
      } catch (const std::exception&) {
        throw ConfigError("config: key `" + key + "` expects a number, got `" + value + "`");
      }
    }
    out << key << " = " << value << "\n";
  }
  return out.str();
}

const std::string& Config::raw(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("config: missing required key `" + key + "`");
  return it->second;
}

double Config::get_double(const std::string& key) const {
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw(key), &pos);
    if (pos != raw(key).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("config: key `" + key + "` expects a number, got `" + raw(key) + "`");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config: key `" + key + "` expects an integer");
  return i;
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = raw(key);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError("config: key `" + key + "` expects a boolean");
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::vector<double> values;
  std::istringstream in(raw(key));
  std::string tok;
  while (in >> tok) {
    try {
      values.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("config: key `" + key + "` expects numbers, got `" + tok + "`");
    }
  }
  if (values.empty()) throw ConfigError("config: key `" + key + "` is empty");
  return values;
}

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

}  // namespace rotbec
