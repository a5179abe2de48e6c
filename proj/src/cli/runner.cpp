#include "poledyn/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "poledyn/cli/output.hpp"
#include "poledyn/cli/svg.hpp"

namespace poledyn::cli {

using nlohmann::json;
namespace fs = std::filesystem;

Format format_from_string(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  if (name == "svg") return Format::Svg;
  throw Error("unknown format '" + name + "' (csv, json, svg)");
}

bool RunOptions::wants(Format f) const {
  return formats.empty() || std::find(formats.begin(), formats.end(), f) != formats.end();
}

int RunResult::exit_code() const {
  for (const auto& m : members) {
    if (m.trajectory.terminated_early()) return kExitPartial;
  }
  return kExitClean;
}

IntegratorConfig effective_config(const Scenario& sc, const RunOptions& opt) {
  IntegratorConfig cfg = sc.integrator;
  for (const auto& [k, v] : opt.overrides) apply_integrator_setting(cfg, k, v);
  cfg.validate();
  return cfg;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<ConservedQuantityReport> compute_drift(const Scenario& sc, const Seabed& seabed,
                                                   const Trajectory& tr,
                                                   std::vector<std::string>* errors) {
  std::vector<ConservedQuantityReport> out;
  if (tr.samples.empty()) return out;
  for (const auto& sel : drift_selectors(sc, seabed)) {
    try {
      out.push_back(drift_report(tr, sel));
    } catch (const Error& e) {
      if (errors) errors->push_back(std::string(to_string(sel.quantity)) + ": " + e.what());
    }
  }
  return out;
}

RunResult simulate(const Scenario& sc, const RunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  RunResult res;
  res.scenario = sc;
  res.config = effective_config(sc, opt);
  const std::vector<Pole> poles = sc.poles();
  const auto members = expand_members(sc, opt.seed);
  res.members.resize(members.size());
  parallel_for(members.size(), opt.threads, [&](std::size_t i) {
    MemberResult& r = res.members[i];
    r.member = members[i];
    const Seabed& bed = sc.seabeds[r.member.seabed].seabed;
    try {
      r.trajectory = integrate(r.member.initial, poles, bed, res.config);
    } catch (const Error& e) {
      r.trajectory.labels = labels_of(poles);
      r.trajectory.samples.push_back(r.member.initial);
      r.trajectory.events.push_back({EventKind::Failure, r.member.initial.time, {}, {}, e.what()});
    }
    r.drift = compute_drift(sc, bed, r.trajectory, &r.drift_errors);
  });
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::string member_stem(const char* kind, std::size_t index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu.%s", kind, index, ext);
  return buf;
}

namespace {

json member_summary(const MemberResult& m, const Scenario& sc) {
  json j;
  j["index"] = m.member.index;
  j["seabed"] = sc.seabeds[m.member.seabed].name;
  j["midpoint"] = {m.member.midpoint.real(), m.member.midpoint.imag()};
  j["heading_deg"] = m.member.heading * 180.0 / kPi;
  j["samples"] = m.trajectory.samples.size();
  j["boundary_crossings"] = m.trajectory.count(EventKind::BoundaryCrossing);
  if (const Event* e = m.trajectory.terminal_event()) {
    j["terminal"] = {{"kind", std::string(to_string(e->kind))}, {"t", e->time}};
    if (!e->detail.empty()) j["terminal"]["detail"] = e->detail;
  }
  json drift = json::object();
  for (const auto& r : m.drift) {
    if (!drift.contains(r.name) || drift[r.name].get<double>() < r.max_rel_drift) {
      drift[r.name] = r.max_rel_drift;
    }
  }
  j["max_rel_drift"] = std::move(drift);
  if (!m.drift_errors.empty()) j["drift_errors"] = m.drift_errors;
  return j;
}

std::string plot_for(const RunResult& res, std::optional<std::size_t> seabed) {
  const Scenario& sc = res.scenario;
  PlanePlot plot;
  const std::size_t shade = seabed.value_or(0);
  plot.seabed = &sc.seabeds[shade].seabed;
  plot.title = sc.name + (seabed ? " (" + sc.seabeds[shade].name + ")" : std::string{});
  std::size_t colour = 0;
  for (const auto& m : res.members) {
    if (seabed && m.member.seabed != *seabed) continue;
    auto lines = trajectory_lines(m.trajectory, sc.seabeds.size() > 1 && !seabed
                                                    ? m.member.seabed
                                                    : colour++);
    plot.lines.insert(plot.lines.end(), lines.begin(), lines.end());
    for (const auto& e : m.trajectory.events) {
      if (e.kind == EventKind::Collision || e.kind == EventKind::ZenoTrap) {
        plot.markers.push_back(e.location);
      }
    }
  }
  return render_plane_svg(plot);
}

}  // namespace

std::vector<std::string> write_outputs(const RunResult& res, const RunOptions& opt) {
  std::vector<std::string> written;
  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) throw Error("cannot create " + opt.out_dir + ": " + ec.message());
  auto put = [&](const std::string& name, const std::string& text) {
    const std::string path = (fs::path(opt.out_dir) / name).string();
    write_file(path, text);
    written.push_back(path);
  };

  for (const auto& m : res.members) {
    if (opt.wants(Format::Csv)) {
      std::ostringstream os;
      write_trajectory_csv(os, m.trajectory);
      put(member_stem("traj", m.member.index, "csv"), os.str());
    }
    if (opt.wants(Format::Json)) {
      put(member_stem("events", m.member.index, "json"), events_json(m.trajectory.events));
      put(member_stem("drift", m.member.index, "json"), drift_json(m.drift));
    }
  }
  if (opt.wants(Format::Json)) {
    json s;
    s["scenario"] = res.scenario.name;
    s["description"] = res.scenario.description;
    s["source"] = res.scenario.source;
    s["exit_code"] = res.exit_code();
    s["labels"] = res.members.empty() ? json::array() : json(res.members.front().trajectory.labels);
    const auto& c = res.config;
    s["integrator"] = {{"method", std::string(to_string(c.method))},
                       {"t_end", c.t_end},
                       {"rel_tol", c.rel_tol},
                       {"abs_tol", c.abs_tol},
                       {"max_step", c.max_step},
                       {"eps_coll", c.eps_coll},
                       {"event_tol", c.event_tol},
                       {"sample_interval", c.sample_interval}};
    json members = json::array();
    for (const auto& m : res.members) members.push_back(member_summary(m, res.scenario));
    s["members"] = std::move(members);
    put("summary.json", s.dump(2) + "\n");
  }
  if (opt.wants(Format::Svg)) {
    put("plot.svg", plot_for(res, std::nullopt));
    if (res.scenario.seabeds.size() > 1) {
      for (std::size_t b = 0; b < res.scenario.seabeds.size(); ++b) {
        put("plot_" + res.scenario.seabeds[b].name + ".svg", plot_for(res, b));
      }
    }
  }
  return written;
}

std::vector<std::size_t> recheck_drift(const Scenario& sc, const std::string& dir) {
  const json summary = json::parse(read_file((fs::path(dir) / "summary.json").string()));
  std::vector<std::size_t> mismatched;
  for (const auto& m : summary.at("members")) {
    const std::size_t index = m.at("index").get<std::size_t>();
    const std::string bed_name = m.at("seabed").get<std::string>();
    auto bed = std::find_if(sc.seabeds.begin(), sc.seabeds.end(),
                            [&](const NamedSeabed& b) { return b.name == bed_name; });
    if (bed == sc.seabeds.end()) throw Error("summary names unknown seabed '" + bed_name + "'");
    std::ifstream csv(fs::path(dir) / member_stem("traj", index, "csv"));
    if (!csv) throw Error("missing trajectory file for member " + std::to_string(index));
    Trajectory tr = read_trajectory_csv(csv);
    tr.events = parse_events_json(read_file((fs::path(dir) / member_stem("events", index, "json")).string()));
    const std::string again = drift_json(compute_drift(sc, bed->seabed, tr));
    const std::string stored = read_file((fs::path(dir) / member_stem("drift", index, "json")).string());
    if (again != stored) mismatched.push_back(index);
  }
  return mismatched;
}

}  // namespace poledyn::cli
