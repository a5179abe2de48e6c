#include "poledyn/cli/output.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "poledyn/cli/config.hpp"

namespace poledyn::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf, ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  const std::size_t n = tr.labels.size();
  os << 't';
  for (std::size_t i = 1; i <= n; ++i) os << ",x" << i << ",y" << i;
  os << '\n';
  for (const auto& s : tr.samples) {
    os << format_double(s.time);
    for (Complex z : s.positions) {
      os << ',' << format_double(z.real()) << ',' << format_double(z.imag());
    }
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  Trajectory tr;
  std::string line;
  if (!std::getline(is, line)) throw Error("empty trajectory file");
  std::size_t cols = 1;
  for (char c : line) cols += c == ',';
  if (line.rfind("t", 0) != 0 || cols % 2 == 0) throw Error("malformed trajectory header");
  const std::size_t n = (cols - 1) / 2;
  for (std::size_t i = 1; i <= n; ++i) tr.labels.push_back(std::to_string(i));
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> v;
    try {
      v = parse_doubles(line);
    } catch (const Error& e) {
      throw Error("trajectory row " + std::to_string(row) + ": " + e.what());
    }
    if (v.size() != cols) throw Error("trajectory row " + std::to_string(row) + " has wrong width");
    SystemState s;
    s.time = v[0];
    for (std::size_t i = 0; i < n; ++i) s.positions.emplace_back(v[1 + 2 * i], v[2 + 2 * i]);
    tr.samples.push_back(std::move(s));
  }
  return tr;
}

std::string events_json(const std::vector<Event>& events) {
  json arr = json::array();
  for (const auto& e : events) {
    json j;
    j["kind"] = std::string(to_string(e.kind));
    j["t"] = e.time;
    j["pole"] = e.pole;
    j["x"] = e.location.real();
    j["y"] = e.location.imag();
    if (!e.detail.empty()) j["detail"] = e.detail;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<Event> parse_events_json(const std::string& text) {
  std::vector<Event> out;
  try {
    for (const auto& j : json::parse(text)) {
      Event e;
      e.kind = event_kind_from_string(j.at("kind").get<std::string>());
      e.time = j.at("t").get<double>();
      e.pole = j.at("pole").get<std::string>();
      e.location = {j.at("x").get<double>(), j.at("y").get<double>()};
      if (j.contains("detail")) e.detail = j["detail"].get<std::string>();
      out.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw Error(std::string("malformed events file: ") + ex.what());
  }
  return out;
}

std::string drift_json(const std::vector<ConservedQuantityReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json segs = json::array();
    for (const auto& s : r.per_segment) {
      segs.push_back({{"t_begin", s.t_begin},
                      {"t_end", s.t_end},
                      {"samples", s.samples},
                      {"start", {s.start.real(), s.start.imag()}},
                      {"max_abs_drift", s.max_abs_drift},
                      {"max_rel_drift", s.max_rel_drift}});
    }
    arr.push_back({{"quantity", r.name},
                   {"max_abs_drift", r.max_abs_drift},
                   {"max_rel_drift", r.max_rel_drift},
                   {"per_segment", std::move(segs)}});
  }
  return arr.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  os << contents;
  if (!os) throw Error("cannot write " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace poledyn::cli
