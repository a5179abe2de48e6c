#pragma once

// Scenario files: seabeds, poles, vortex pairs, ensembles and integrator
// settings, expanded into independent integration members.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poledyn/cli/config.hpp"
#include "poledyn/integrator.hpp"
#include "poledyn/invariants.hpp"
#include "poledyn/seabed.hpp"

namespace poledyn::cli {

inline constexpr int kSchemaVersion = 1;

struct NamedSeabed {
  std::string name;
  Seabed seabed;
};

/// Two poles of strengths -mu and +mu, the plus pole at
/// midpoint + (separation/2) e^{i axis}.
struct PairSpec {
  std::string name;
  Complex midpoint{};
  std::optional<double> axis;     ///< radians
  std::optional<double> heading;  ///< initial direction of travel, radians
  double separation = 0.05;
  Complex mu{0.0, 1.0};
  std::string minus_label = "m";
  std::string plus_label = "p";
};

struct EnsembleSpec {
  enum class Mode { Directions, Line, Points };
  Mode mode = Mode::Directions;
  int count = 16;
  Complex center{};
  Complex from{};
  Complex to{};
  double from_deg = 0.0;
  double to_deg = 360.0;
  double heading_deg = 90.0;
  std::vector<Complex> midpoints;
  std::vector<double> headings_deg;
  double jitter_deg = 0.0;
  std::uint64_t seed = 1;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name;
  std::string description;
  std::string source;
  std::vector<NamedSeabed> seabeds;
  std::vector<Pole> fixed_poles;
  std::vector<PairSpec> pairs;
  std::optional<EnsembleSpec> ensemble;
  IntegratorConfig integrator;
  std::vector<Quantity> drift;  ///< empty: chosen automatically
  Document document;            ///< kept for experiment-specific sections

  /// Fixed poles followed by the two poles of every pair, placed for the
  /// first seabed.
  std::vector<Pole> poles() const;
};

struct Member {
  std::size_t index = 0;
  std::size_t seabed = 0;
  SystemState initial;
  Complex midpoint{};  ///< of the ensemble pair, when there is one
  double heading = 0.0;
};

Scenario parse_scenario(const Document& doc);
Scenario load_scenario(const std::string& path);

/// Axis angle that makes a pair of strength mu travel along heading where
/// the seabed has sign s_sign.
double axis_for_heading(double heading, Complex mu, double s_sign);
std::vector<Pole> pair_poles(const PairSpec& pair, double axis);
double resolve_axis(const PairSpec& pair, const Seabed& seabed);

/// One member per ensemble point per seabed (seabed-major order).
std::vector<Member> expand_members(const Scenario& sc, std::optional<std::uint64_t> seed = {});

/// key=value override of an integrator setting; throws Error on unknown keys.
void apply_integrator_setting(IntegratorConfig& cfg, const std::string& key,
                              const std::string& value);

std::vector<QuantitySelector> drift_selectors(const Scenario& sc, const Seabed& seabed);

Seabed parse_seabed(const Section& s);

std::string default_preset_dir();
/// A path to an existing file, or a preset name looked up in preset_dir.
std::string resolve_scenario(const std::string& name_or_path, const std::string& preset_dir);
std::vector<std::string> list_presets(const std::string& preset_dir);

}  // namespace poledyn::cli
