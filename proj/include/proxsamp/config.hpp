#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "proxsamp/common.hpp"

namespace proxsamp {

/// Line-oriented `key = value` configuration with `[section]` headers, UTF-8,
/// `#` comments. Unknown keys are hard errors, reported with line numbers.
class ConfigFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static ConfigFile parse_text(const std::string& text) {
    ConfigFile cfg;
    cfg.raw_ = text;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']')
          throw InputError("config line " + std::to_string(line_no) +
                           ": unterminated section header");
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        if (section.empty())
          throw InputError("config line " + std::to_string(line_no) + ": empty section name");
        cfg.sections_[section];  // a section may be present but empty
        continue;
      }
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw InputError("config line " + std::to_string(line_no) +
                         ": expected `key = value`");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw InputError("config line " + std::to_string(line_no) + ": empty key");
      auto& sec = cfg.sections_[section];
      if (sec.count(key))
        throw InputError("config line " + std::to_string(line_no) + ": duplicate key `" +
                         key + "`");
      sec[key] = Entry{value, line_no};
    }
    return cfg;
  }

  static ConfigFile parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
  }

  const std::string& raw_text() const { return raw_; }

  bool has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
  }

  std::string get_string(const std::string& section, const std::string& key) const {
    return entry(section, key).value;
  }

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
  }

  double get_double(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    return parse_double(e.value, e.line);
  }

  double get_double(const std::string& section, const std::string& key,
                    double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
  }

  long get_long(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    try {
      std::size_t pos = 0;
      const long v = std::stol(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw InputError("config line " + std::to_string(e.line) + ": `" + e.value +
                       "` is not an integer");
    }
  }

  long get_long(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? get_long(section, key) : fallback;
  }

  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    const Entry& e = entry(section, key);
    try {
      std::size_t pos = 0;
      const std::uint64_t v = std::stoull(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw InputError("config line " + std::to_string(e.line) +
                       ": `" + e.value + "` is not an unsigned integer");
    }
  }

  // `[v1, v2, ...]`
  Vec get_vec(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    std::string s = trim(e.value);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
      throw InputError("config line " + std::to_string(e.line) +
                       ": expected a bracketed list");
    s = s.substr(1, s.size() - 2);
    Vec out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty())
        throw InputError("config line " + std::to_string(e.line) + ": empty list element");
      out.push_back(parse_double(t, e.line));
    }
    if (out.empty())
      throw InputError("config line " + std::to_string(e.line) + ": empty list");
    return out;
  }

  Vec get_vec(const std::string& section, const std::string& key, const Vec& fallback) const {
    return has(section, key) ? get_vec(section, key) : fallback;
  }

  /// Rejects any key outside the per-section allow-lists (and any section not
  /// listed at all), naming the offending line.
  void validate_keys(const std::map<std::string, std::set<std::string>>& allowed) const {
    for (const auto& [section, entries] : sections_) {
      auto it = allowed.find(section);
      if (it == allowed.end()) {
        const int line = entries.empty() ? 0 : entries.begin()->second.line;
        throw InputError("config line " + std::to_string(line) + ": unknown section [" +
                         section + "]");
      }
      for (const auto& [key, e] : entries) {
        if (!it->second.count(key))
          throw InputError("config line " + std::to_string(e.line) + ": unknown key `" +
                           key + "` in [" + section + "]");
      }
    }
  }

 private:
  static std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
  }

  static double parse_double(const std::string& s, int line) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw InputError("config line " + std::to_string(line) + ": `" + s +
                       "` is not a number");
    }
  }

  const Entry& entry(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
      throw InputError("config: missing required key `" + key + "` in [" + section + "]");
    return s->second.at(key);
  }

  std::string raw_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

// FNV-1a 64-bit digest of the raw config bytes; recorded in every CSV header.
inline std::uint64_t config_digest(const std::string& raw) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : raw) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace proxsamp
