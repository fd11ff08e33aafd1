#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tapc {

/// One schema entry of the flat key=value configuration.
struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

/// Every key the configuration accepts, in canonical order.
const std::vector<ConfigKey>& config_schema();

/// Flat, schema-validated run configuration. Values are stored as text so
/// that the canonical form (and its fingerprint) is exactly what a replay
/// reads back; typed getters validate on access.
class RunConfig {
 public:
  RunConfig();

  /// Throws ConfigError on an unknown key.
  void set(std::string_view key, std::string_view value);
  const std::string& get(std::string_view key) const;
  bool is_default(std::string_view key) const;

  std::string text(std::string_view key) const { return get(key); }
  double real(std::string_view key) const;
  std::optional<double> optional_real(std::string_view key) const;
  long integer(std::string_view key) const;
  std::uint64_t unsigned_integer(std::string_view key) const;
  bool boolean(std::string_view key) const;
  /// Comma-separated list; empty text gives an empty list.
  std::vector<std::string> list(std::string_view key) const;
  std::vector<double> real_list(std::string_view key) const;

  /// Applies a named bundle of defaults (currently only `river-runoff`).
  void apply_profile(std::string_view name);

  /// `key=value` lines for every schema key in schema order.
  std::string canonical() const;
  /// 16 hex digits (FNV-1a 64 of canonical()).
  std::string fingerprint() const;
  /// `# tapc <command> fingerprint=<hex> key=value ...` with non-default keys.
  std::string comment_line() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

/// Parses key=value lines; '#' starts a comment, blank lines are ignored.
/// Unknown keys and malformed lines throw ConfigError naming the line.
RunConfig parse_run_config(std::string_view text, std::string_view source = "<config>");

}  // namespace tapc
