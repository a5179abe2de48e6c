#pragma once

// Hybrid integration of pole systems: adaptive Dormand-Prince stepping inside
// seabed regions, located region crossings, collision and Zeno detection.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poledyn/seabed.hpp"
#include "poledyn/types.hpp"

namespace poledyn {

enum class Method { Dopri5, Rk4 };

std::string_view to_string(Method m) noexcept;
Method method_from_string(std::string_view name);

struct ZenoWindow {
  int max_events = 16;
  double per_time = 1e-6;
};

struct IntegratorConfig {
  double t_end = 1.0;
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 1e-2;
  double eps_coll = kDefaultCollisionEps;
  double event_tol = 1e-12;
  ZenoWindow zeno;
  double sample_interval = 1e-3;
  Method method = Method::Dopri5;
  double fixed_step = 1e-3;  ///< RK4 only
  int checkpoints = 16;      ///< region checks per accepted step
  long max_steps = 20'000'000;

  /// Throws Error naming the offending field.
  void validate() const;
};

/// Cubic/quartic interpolant over one step, y(t0 + theta h).
class DenseOutput {
 public:
  DenseOutput() = default;
  double t0() const noexcept { return t0_; }
  double h() const noexcept { return h_; }
  void eval(double theta, std::span<Complex> out) const;
  std::vector<Complex> eval(double theta) const;

 private:
  friend struct StepKernel;
  double t0_ = 0.0;
  double h_ = 0.0;
  std::vector<Complex> r1_, r2_, r3_, r4_, r5_;
};

using RhsFn = std::function<void(std::span<const Complex> z, std::span<Complex> dz)>;

/// One explicit step; exposed for tests of order and dense output.
struct StepKernel {
  struct Result {
    std::vector<Complex> y1;
    std::vector<Complex> f1;  ///< f(y1)
    double error = 0.0;       ///< scaled error norm, 0 for RK4
    DenseOutput dense;
  };
  static Result dopri5(const RhsFn& f, double t0, std::span<const Complex> y0,
                       std::span<const Complex> f0, double h, double rel_tol, double abs_tol);
  static Result rk4(const RhsFn& f, double t0, std::span<const Complex> y0,
                    std::span<const Complex> f0, double h);
  static double initial_step(const RhsFn& f, std::span<const Complex> y0,
                             std::span<const Complex> f0, double rel_tol, double abs_tol,
                             double max_step);
};

struct Crossing {
  double time = 0.0;
  SystemState state;               ///< advanced to the crossing
  std::vector<std::string> poles;  ///< poles whose region changed
  std::vector<Complex> locations;  ///< crossing points projected on the locus
};

/// Crossing between two states assuming straight-line motion in between.
/// With an empty label the earliest crossing of any pole is returned.
/// Throws Error when no crossing is bracketed.
Crossing locate_crossing(const SystemState& before, const SystemState& after,
                         std::span<const std::string> labels, const Seabed& seabed,
                         std::string_view pole_label = {}, double event_tol = 1e-12);

/// Same on a dense interpolant; regions are the tracked regions at theta = 0.
Crossing locate_crossing(const DenseOutput& dense, std::span<const int> regions,
                         std::span<const std::string> labels, const Seabed& seabed,
                         double theta_lo, double theta_hi, double event_tol);

/// Integrates from initial (positions keyed like poles) to config.t_end.
/// Collisions, Zeno traps and failures end the run and are recorded as
/// events; the final event is always one of horizon/collision/zeno/failure.
Trajectory integrate(const SystemState& initial, std::span<const Pole> poles,
                     const Seabed& seabed, const IntegratorConfig& config);
/// Starts from the poles' own positions at t = 0.
Trajectory integrate(std::span<const Pole> poles, const Seabed& seabed,
                     const IntegratorConfig& config);

/// Independent members integrated on a thread pool; results keep input order.
/// threads = 0 uses the hardware concurrency.
std::vector<Trajectory> integrate_ensemble(std::span<const SystemState> initials,
                                           std::span<const Pole> poles, const Seabed& seabed,
                                           const IntegratorConfig& config, unsigned threads = 0);

/// The same poles with every strength negated: integrating these forward
/// retraces the original motion backward in time.
std::vector<Pole> time_reversed(std::span<const Pole> poles);

}  // namespace poledyn
