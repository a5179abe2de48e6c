#pragma once

// Minimal INI-style key = value format used by scenario files.
//
//   # comment
//   schema_version = 1
//   [section.name]
//   key = value

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poledyn/types.hpp"

namespace poledyn::cli {

class ConfigError : public Error {
 public:
  ConfigError(std::string source, int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

class Section {
 public:
  std::string name;  ///< empty for the top level
  int line = 0;
  std::vector<Entry> entries;

  const Entry* find(std::string_view key) const;
  bool has(std::string_view key) const { return find(key) != nullptr; }
  /// Marks every key as read; unknown keys can then be reported.
  std::vector<const Entry*> unread() const;

  std::string get_string(std::string_view key, const std::string& fallback) const;
  std::string require_string(std::string_view key) const;
  double get_double(std::string_view key, double fallback) const;
  double require_double(std::string_view key) const;
  long get_long(std::string_view key, long fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  /// "x y" or "x, y".
  Complex get_complex(std::string_view key, Complex fallback) const;
  Complex require_complex(std::string_view key) const;
  /// Whitespace or comma separated reals.
  std::vector<double> get_doubles(std::string_view key) const;
  /// Groups separated by ';', each a list of reals.
  std::vector<std::vector<double>> get_groups(std::string_view key) const;

  std::string source;  ///< file name for diagnostics
  [[noreturn]] void fail(const Entry& e, const std::string& message) const;
  [[noreturn]] void fail(const std::string& message) const;

 private:
  mutable std::vector<bool> read_;
  const Entry& touch(const Entry& e) const;
};

struct Document {
  std::string source;
  std::vector<Section> sections;  ///< sections[0] is the top level

  const Section& top() const { return sections.front(); }
  const Section* find(std::string_view name) const;
  /// Sections named exactly prefix or prefix.*, in file order.
  std::vector<const Section*> with_prefix(std::string_view prefix) const;
};

Document parse_config(std::string_view text, std::string source = "<input>");
Document load_config(const std::string& path);

double parse_double(std::string_view text);
std::vector<double> parse_doubles(std::string_view text);

}  // namespace poledyn::cli
