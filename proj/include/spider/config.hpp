#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spider {

/// Flat key/value configuration with dotted section names:
///   problem.name = quadratic
///   eps = 0.1,0.05
///   # comment
/// Lookups throw with the offending field path so the CLI can report it.
class ConfigMap {
 public:
  static ConfigMap parse_file(const std::string& path);
  static ConfigMap parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  const std::map<std::string, std::string>& raw() const { return values_; }
  const std::string& source_text() const { return source_; }

 private:
  std::map<std::string, std::string> values_;
  std::string source_;
};

/// Error carrying the config field path; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config error at " + field + ": " + what) {}
};

}  // namespace spider
