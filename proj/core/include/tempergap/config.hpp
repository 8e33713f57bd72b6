#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tempergap {

enum class ConfigType { Real, Integer, String, RealList, Boolean };

struct ConfigKey {
  std::string name;  // "section.key"
  ConfigType type;
  std::string default_value;  // empty: no default
  std::string description;
};

/// The documented experiment schema.
const std::vector<ConfigKey>& config_schema();

/// Validated experiment configuration. Values are stored as text and
/// converted on access; every key is checked against the schema on load.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;

  /// Parse an INI-style document ("[section]" headers, "key = value" lines,
  /// '#' or ';' comments). Throws ConfigError listing every unknown key.
  static ExperimentConfig from_ini(const std::string& text);

  /// Parse {"section": {"key": value}}. A run manifest is accepted as well:
  /// its "config" member is used.
  static ExperimentConfig from_json(const std::string& text);

  /// Dispatch on the file extension (.json or anything else).
  static ExperimentConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  bool boolean(const std::string& key) const;

  /// Throws ConfigError when the seed is missing or values fail to parse.
  void validate() const;

  /// Explicitly set values (defaults excluded), sorted by key.
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string to_ini() const;
  std::string to_json() const;  // {"section": {"key": "value"}}

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

/// Markdown table describing the schema.
std::string config_schema_markdown();

}  // namespace tempergap
