#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orbqfl {

// Flat `key = value` configuration. Lines starting with '#' are comments.
// Lookups that fail to convert, or required keys that are absent, throw
// ConfigError naming the key.
class Config {
 public:
  static Config parse(std::string_view text, std::string_view origin = "<string>");
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
  bool contains(const std::string& key) const { return entries_.contains(key); }
  std::optional<std::string> find(const std::string& key) const;

  /// Entries of `overrides` replace ours.
  void merge(const Config& overrides);

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list of numbers; an empty value yields an empty list.
  std::vector<double> get_doubles(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

  /// Sorted `key = value` lines; parse(dump()) reproduces the entries.
  std::string dump() const;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace orbqfl
