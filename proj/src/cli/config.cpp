#include "poledyn/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace poledyn::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, const std::string& message)
    : Error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

double parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  if (text == "pi") return kPi;
  if (text == "-pi") return -kPi;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error("'" + std::string(text) + "' is not a finite number");
  }
  return v;
}

std::vector<double> parse_doubles(std::string_view text) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.push_back(parse_double(token));
    token.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return out;
}

const Entry* Section::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &touch(e);
  }
  return nullptr;
}

const Entry& Section::touch(const Entry& e) const {
  read_.resize(entries.size(), false);
  read_[static_cast<std::size_t>(&e - entries.data())] = true;
  return e;
}

std::vector<const Entry*> Section::unread() const {
  read_.resize(entries.size(), false);
  std::vector<const Entry*> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!read_[i]) out.push_back(&entries[i]);
  }
  return out;
}

void Section::fail(const Entry& e, const std::string& message) const {
  throw ConfigError(source, e.line, "[" + name + "] " + e.key + ": " + message);
}

void Section::fail(const std::string& message) const {
  throw ConfigError(source, line, (name.empty() ? std::string("top level") : "[" + name + "]") + ": " + message);
}

std::string Section::get_string(std::string_view key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

std::string Section::require_string(std::string_view key) const {
  const Entry* e = find(key);
  if (!e) fail("missing required key '" + std::string(key) + "'");
  return e->value;
}

double Section::get_double(std::string_view key, double fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  try {
    return parse_double(e->value);
  } catch (const Error& err) {
    fail(*e, err.what());
  }
}

double Section::require_double(std::string_view key) const {
  if (!find(key)) fail("missing required key '" + std::string(key) + "'");
  return get_double(key, 0.0);
}

long Section::get_long(std::string_view key, long fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  long v = 0;
  const std::string_view s = trim(e->value);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail(*e, "'" + e->value + "' is not an integer");
  return v;
}

bool Section::get_bool(std::string_view key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  const std::string_view s = trim(e->value);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  fail(*e, "'" + e->value + "' is not a boolean");
}

Complex Section::get_complex(std::string_view key, Complex fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<double> v;
  try {
    v = parse_doubles(e->value);
  } catch (const Error& err) {
    fail(*e, err.what());
  }
  if (v.size() != 2) fail(*e, "expected two numbers 're im'");
  return {v[0], v[1]};
}

Complex Section::require_complex(std::string_view key) const {
  if (!find(key)) fail("missing required key '" + std::string(key) + "'");
  return get_complex(key, {});
}

std::vector<double> Section::get_doubles(std::string_view key) const {
  const Entry* e = find(key);
  if (!e) return {};
  try {
    return parse_doubles(e->value);
  } catch (const Error& err) {
    fail(*e, err.what());
  }
}

std::vector<std::vector<double>> Section::get_groups(std::string_view key) const {
  const Entry* e = find(key);
  if (!e) return {};
  std::vector<std::vector<double>> out;
  std::stringstream ss(e->value);
  std::string part;
  try {
    while (std::getline(ss, part, ';')) out.push_back(parse_doubles(part));
  } catch (const Error& err) {
    fail(*e, err.what());
  }
  return out;
}

const Section* Document::find(std::string_view name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<const Section*> Document::with_prefix(std::string_view prefix) const {
  std::vector<const Section*> out;
  for (const auto& s : sections) {
    if (s.name == prefix ||
        (s.name.size() > prefix.size() && s.name.compare(0, prefix.size(), prefix) == 0 &&
         s.name[prefix.size()] == '.')) {
      out.push_back(&s);
    }
  }
  return out;
}

Document parse_config(std::string_view text, std::string source) {
  Document doc;
  doc.source = source;
  doc.sections.push_back(Section{});
  doc.sections.back().source = source;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, "unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) throw ConfigError(source, line_no, "invalid section name '" + std::string(name) + "'");
      if (doc.find(name)) throw ConfigError(source, line_no, "duplicate section [" + std::string(name) + "]");
      Section s;
      s.name = std::string(name);
      s.line = line_no;
      s.source = source;
      doc.sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError(source, line_no, "invalid key '" + std::string(key) + "'");
    Section& cur = doc.sections.back();
    for (const auto& e : cur.entries) {
      if (e.key == key) throw ConfigError(source, line_no, "duplicate key '" + std::string(key) + "'");
    }
    cur.entries.push_back({std::string(key), std::string(value), line_no});
  }
  return doc;
}

Document load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace poledyn::cli
