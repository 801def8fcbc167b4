#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Flat `key = value` run configuration. Keys are validated against the
// schema at parse time; a `preset = <name>` line expands to the named
// built-in configuration with the remaining lines overlaid on top.

namespace rotbec {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  // Canonical normalized text: schema order, one `key = value` per line,
  // shortest round-trip number formatting. parse(emit(c)).emit() == emit(c).
  std::string emit() const;

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;  // whitespace separated

  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& entries() const { return kv_; }

  static const std::vector<std::string>& schema();

 private:
  std::map<std::string, std::string> kv_;
};

// Built-in experiment presets; throws ConfigError for unknown names.
Config preset_config(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace rotbec
