#pragma once

// Flat key = value config with [section] headers. Keys are addressed as
// "section.key". Every value read (defaults included) is remembered so the
// run can write back the configuration it actually used.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fourlin::cli {

// Malformed or unknown configuration; the message names file and line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  Config() = default;

  static Config parse(std::string_view text, const std::string& source);
  static Config load(const std::string& path);

  // "section.key=value"; later assignments win.
  void set_override(std::string_view assignment);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback);
  std::int64_t get_int(const std::string& key, std::int64_t fallback);
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback);
  double get_double(const std::string& key, double fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<std::int64_t> get_int_list(const std::string& key, const std::vector<std::int64_t>& fallback);

  // Throws for the first supplied key that no command read.
  void reject_unused() const;

  // Sections and keys sorted; parses back to the same values.
  std::string resolved_text() const;

 private:
  struct Entry {
    std::string value;
    std::string origin;  // "file:line" or "--set"
  };

  const Entry* find(const std::string& key) const;
  void remember(const std::string& key, const std::string& value);
  [[noreturn]] void bad_value(const std::string& key, const char* expected) const;

  std::map<std::string, Entry> entries_;
  std::map<std::string, std::string> resolved_;
};

// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace fourlin::cli
