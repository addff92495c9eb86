#include "config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fourlin::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

template <typename T>
bool parse_integer(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& source) {
  Config cfg;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);

    auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) throw ConfigError(where + ": invalid section name '" + std::string(name) + "'");
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError(where + ": invalid key '" + std::string(key) + "'");
    if (section.empty()) throw ConfigError(where + ": key '" + std::string(key) + "' appears before any [section]");
    const std::string full = section + "." + std::string(key);
    if (cfg.entries_.count(full)) throw ConfigError(where + ": duplicate key '" + full + "'");
    cfg.entries_[full] = {std::string(value), where};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void Config::set_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto key = trim(assignment.substr(0, eq));
  const auto dot = key.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || !valid_name(key.substr(0, dot)) ||
      !valid_name(key.substr(dot + 1))) {
    throw ConfigError("--set expects section.key=value, got '" + std::string(assignment) + "'");
  }
  entries_[std::string(key)] = {std::string(trim(assignment.substr(eq + 1))), "--set " + std::string(key)};
}

const Config::Entry* Config::find(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void Config::remember(const std::string& key, const std::string& value) { resolved_[key] = value; }

void Config::bad_value(const std::string& key, const char* expected) const {
  const Entry* e = find(key);
  throw ConfigError(e->origin + ": '" + key + "' expects " + expected + ", got '" + e->value + "'");
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  const Entry* e = find(key);
  const std::string value = e ? e->value : fallback;
  remember(key, value);
  return value;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) {
  const Entry* e = find(key);
  std::int64_t value = fallback;
  if (e && !parse_integer(e->value, value)) bad_value(key, "an integer");
  remember(key, std::to_string(value));
  return value;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) {
  const Entry* e = find(key);
  std::uint64_t value = fallback;
  if (e && !parse_integer(e->value, value)) bad_value(key, "a non-negative integer");
  remember(key, std::to_string(value));
  return value;
}

double Config::get_double(const std::string& key, double fallback) {
  const Entry* e = find(key);
  double value = fallback;
  if (e) {
    const auto* end = e->value.data() + e->value.size();
    const auto [ptr, ec] = std::from_chars(e->value.data(), end, value);
    if (ec != std::errc{} || ptr != end) bad_value(key, "a number");
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  remember(key, buf);
  return value;
}

bool Config::get_bool(const std::string& key, bool fallback) {
  const Entry* e = find(key);
  bool value = fallback;
  if (e) {
    if (e->value == "true" || e->value == "1") {
      value = true;
    } else if (e->value == "false" || e->value == "0") {
      value = false;
    } else {
      bad_value(key, "true or false");
    }
  }
  remember(key, value ? "true" : "false");
  return value;
}

std::vector<std::int64_t> Config::get_int_list(const std::string& key, const std::vector<std::int64_t>& fallback) {
  const Entry* e = find(key);
  std::vector<std::int64_t> out = fallback;
  if (e) {
    out.clear();
    std::string_view rest = e->value;
    while (true) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      std::int64_t v = 0;
      if (!parse_integer(item, v)) bad_value(key, "a comma-separated list of integers");
      out.push_back(v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  std::string text;
  for (std::size_t i = 0; i < out.size(); ++i) text += (i ? "," : "") + std::to_string(out[i]);
  remember(key, text);
  return out;
}

void Config::reject_unused() const {
  for (const auto& [key, entry] : entries_) {
    if (!resolved_.count(key)) throw ConfigError(entry.origin + ": unknown key '" + key + "' for this command");
  }
}

std::string Config::resolved_text() const {
  std::string out;
  std::string section;
  for (const auto& [key, value] : resolved_) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fourlin::cli
