#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sclink {

/// Flat `key = value` configuration with dotted keys and `#` comments.
///
/// Keys are checked against a fixed schema at parse time, so a typo or an
/// unknown band label fails with the offending key and line. Relative paths
/// resolve against the directory of the config file.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& in, const std::string& source_name,
                      const std::string& base_dir = ".");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  /// Adds or replaces a key (command-line overrides). Validated like parsed keys.
  void set(const std::string& key, const std::string& value);

  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  /// Comma-separated list.
  std::vector<std::string> list(const std::string& key) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
  /// Resolved path; nullopt when the key is absent.
  std::optional<std::string> path(const std::string& key) const;

  /// Keys under `prefix`, e.g. all `pumps.draw_curve.*` entries.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  /// Sorted `key=value` lines with paths resolved; stable input for hashing.
  std::string canonical() const;
  const std::string& source() const { return source_; }
  const std::string& base_dir() const { return base_dir_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
  const Entry* find(const std::string& key) const;

  std::map<std::string, Entry> values_;
  std::string source_ = "<config>";
  std::string base_dir_ = ".";
};

/// Throws ValidationError if `key` is not part of the schema.
void check_config_key(const std::string& key);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace sclink
