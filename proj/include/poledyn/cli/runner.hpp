#pragma once

// Runs a scenario's members in parallel and writes the results from a
// single thread once every member has finished.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poledyn/cli/scenario.hpp"
#include "poledyn/invariants.hpp"

namespace poledyn::cli {

enum class Format { Csv, Json, Svg };
Format format_from_string(const std::string& name);

inline constexpr int kExitClean = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPartial = 2;

struct RunOptions {
  std::string out_dir = "out";
  std::vector<Format> formats;  ///< empty: all formats
  std::vector<std::pair<std::string, std::string>> overrides;
  unsigned threads = 0;  ///< 0: hardware concurrency
  std::optional<std::uint64_t> seed;

  bool wants(Format f) const;
};

struct MemberResult {
  Member member;
  Trajectory trajectory;
  std::vector<ConservedQuantityReport> drift;
  std::vector<std::string> drift_errors;
};

struct RunResult {
  Scenario scenario;
  IntegratorConfig config;
  std::vector<MemberResult> members;
  double wall_seconds = 0.0;

  /// kExitPartial when any member ended on a collision, trap or failure.
  int exit_code() const;
};

IntegratorConfig effective_config(const Scenario& sc, const RunOptions& opt);

/// Calls fn(i) for i in [0, n) on a pool of threads.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Integrates every member and computes its drift reports; no I/O.
RunResult simulate(const Scenario& sc, const RunOptions& opt);

std::vector<ConservedQuantityReport> compute_drift(const Scenario& sc, const Seabed& seabed,
                                                   const Trajectory& tr,
                                                   std::vector<std::string>* errors = nullptr);

/// traj_NNN.csv, events_NNN.json, drift_NNN.json, summary.json, plot*.svg.
/// Returns the written paths.
std::vector<std::string> write_outputs(const RunResult& result, const RunOptions& opt);

/// Re-reads traj/events files from dir and recomputes the drift reports,
/// returning the indices of members whose drift JSON differs.
std::vector<std::size_t> recheck_drift(const Scenario& sc, const std::string& dir);

std::string member_stem(const char* kind, std::size_t index, const char* ext);

}  // namespace poledyn::cli
