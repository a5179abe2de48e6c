#pragma once

// Law verification against the closed forms, the trough amplitude scan and
// the circular-mirror caustic.

#include <string>
#include <vector>

#include "poledyn/analytic.hpp"
#include "poledyn/cli/runner.hpp"
#include "poledyn/cli/scenario.hpp"

namespace poledyn::cli {

/// Pair-axis direction averaged over the final 10% of the samples taken
/// after the last boundary crossing.
double fitted_axis(const Trajectory& tr, std::size_t minus, std::size_t plus);
/// Direction of travel of a pair with strengths -mu, +mu at the end of tr.
double fitted_heading(const Trajectory& tr, std::size_t minus, std::size_t plus, Complex mu,
                      double s_sign);

struct VerifyRow {
  std::string case_name;
  double theta1 = 0.0;
  double s1 = 1.0;
  double s2 = 1.0;
  Complex mu{0.0, 1.0};
  std::string expected_kind;
  std::string simulated_kind;
  double expected = 0.0;
  double simulated = 0.0;
  double error = 0.0;
  bool excluded = false;  ///< skid or trap: reported, not scored
  bool pass = false;
  std::string note;
};

struct VerifyReport {
  std::string law;
  double tolerance = 1e-3;
  bool relative = false;
  std::vector<VerifyRow> rows;
  double max_error = 0.0;
  std::size_t excluded = 0;
  bool pass = false;

  void finish();
};

struct SnellGrid {
  std::vector<double> theta1_deg{10, 20, 30, 40, 50, 60, 70, 80};
  std::vector<double> ratios{0.5, 2.0};  ///< s2 / s1
  double s1 = 1.0;
  Complex mu{0.0, 1.0};
  double separation = 0.05;
  double release = 0.1;  ///< distance of the midpoint below the boundary
};

struct ReflectionGrid {
  std::vector<double> theta1_deg{15, 45, 75};
  /// magnitudes (s1, s2): S = -s1 below the mirror, +s2 above
  std::vector<std::array<double, 2>> levels{{1.0, 1.0}, {3.0, 0.5}};
  std::vector<Complex> mus{{0.0, 1.0}, {0.0, -1.0}};
  double separation = 0.05;
  double release = 0.1;
};

struct LeapfrogSetup {
  double s1 = 1.0;
  double s2 = 3.0;
  Complex dz{0.0, 0.5};
  int half_periods = 4;
  double tolerance = 0.02;  ///< relative
};

struct RainbowSetup {
  double r = 0.5;
  std::vector<double> separations{0.25, 0.8};
  double tolerance = 0.02;  ///< relative
};

/// Base integrator settings for the verification runs.
IntegratorConfig verify_config();

VerifyReport verify_snell(const SnellGrid& grid, IntegratorConfig cfg, unsigned threads);
VerifyReport verify_reflection(const ReflectionGrid& grid, IntegratorConfig cfg,
                               unsigned threads);
VerifyReport verify_leapfrog(const LeapfrogSetup& setup, IntegratorConfig cfg);
VerifyReport verify_rainbow(const RainbowSetup& setup, IntegratorConfig cfg, unsigned threads);

std::string verify_table(const VerifyReport& r);
std::string verify_json(const VerifyReport& r);

struct AmplitudePoint {
  double theta_over_pi = 0.0;
  double amplitude = 0.0;  ///< max |Im| of the pair midpoint
  double predicted = 0.0;  ///< turning height from the Snell invariant
  int extrema = 0;
  bool asymptotic = false;  ///< fewer than two extrema before t_end
  bool confined = true;     ///< every sample of both poles inside the strip
  std::string terminal;
};

struct AmplitudeCurve {
  double y0 = 0.0;
  std::vector<AmplitudePoint> points;
};

struct AmplitudeOptions {
  std::vector<double> theta_over_pi;  ///< empty: 0.05, 0.10, ..., 0.95
  std::vector<double> y0{0.2, 0.5};
  double strip = 2.0;
};

std::vector<AmplitudeCurve> amplitude_scan(const Scenario& trough, const AmplitudeOptions& opt,
                                           const RunOptions& run);
std::string amplitude_csv(const std::vector<AmplitudeCurve>& curves);
std::string amplitude_svg(const std::vector<AmplitudeCurve>& curves);

struct CausticRay {
  std::size_t member = 0;
  double x0 = 0.0;
  bool straddles_endpoint = false;
  double heading_after = 0.0;  ///< radians
  double axis_crossing = 0.0;  ///< NaN when the ray never crosses the axis
  double predicted = 0.0;      ///< same for an ideal ray
};

struct CausticResult {
  RunResult run;
  std::vector<CausticRay> rays;
  std::vector<Complex> envelope;
  double radius = 0.0;
  Complex center{};
};

/// count > 0 replaces the ensemble size of the scenario.
CausticResult caustic(const Scenario& arc, int count, const RunOptions& run);
std::string caustic_svg(const CausticResult& c);
std::string caustic_json(const CausticResult& c);

}  // namespace poledyn::cli
