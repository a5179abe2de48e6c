// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance            all criteria, exit 1 if any fails
//   acceptance 3 6        only the listed ones

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "poledyn/analytic.hpp"
#include "poledyn/cli/experiments.hpp"
#include "poledyn/cli/runner.hpp"
#include "poledyn/cli/scenario.hpp"
#include "poledyn/dynamics.hpp"
#include "poledyn/integrator.hpp"

using namespace poledyn;
using namespace poledyn::cli;

namespace {

constexpr double kDeg = kPi / 180.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double wrap(double a) { return std::remainder(a, 2.0 * kPi); }

double axis_at(const SystemState& s) {
  const Complex d = s.positions[1] - s.positions[0];
  return std::arg(d);
}

// pair released 0.1 below a boundary at Im z = 0
Trajectory release(double axis, Complex mu, const Seabed& bed, IntegratorConfig cfg) {
  PairSpec pair;
  pair.midpoint = {0.0, -0.1};
  pair.mu = mu;
  return integrate(pair_poles(pair, axis), bed, cfg);
}

Outcome snell_law() {
  Outcome o{true, {}};
  double worst = 0.0, slowest = 0.0;
  for (double deg : {10.0, 20.0, 30.0, 40.0}) {
    SnellGrid g;
    g.theta1_deg = {deg};
    g.ratios = {2.0};
    const auto t0 = std::chrono::steady_clock::now();
    const VerifyReport rep = verify_snell(g, verify_config(), 1);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const VerifyRow& r = rep.rows.front();
    const double residual = std::abs(r.s1 * std::sin(r.theta1) - r.s2 * std::sin(r.simulated));
    worst = std::max(worst, residual);
    slowest = std::max(slowest, secs);
    o.pass = o.pass && r.simulated_kind == "refracted" && residual < 1e-3 && secs < 5.0;
  }
  o.detail = fmt("max |s1 sin t1 - s2 sin t2| = %.2e, slowest case %.3f s", worst, slowest);
  return o;
}

Outcome total_internal_reflection() {
  SnellGrid g;
  g.s1 = 2.0;
  g.ratios = {0.5};
  g.theta1_deg = {25.0, 35.0};
  const VerifyReport rep = verify_snell(g, verify_config(), 0);
  const auto& a = rep.rows[0];
  const auto& b = rep.rows[1];
  Outcome o;
  o.pass = a.simulated_kind == "refracted" && b.simulated_kind == "reflected";
  o.detail = "25 deg: " + a.simulated_kind + ", 35 deg: " + b.simulated_kind +
             fmt(", critical %.4f deg", critical_angle(2.0, 1.0) / kDeg);
  return o;
}

Outcome generalized_snell() {
  const Complex mu{1.0, 1.0};
  const double theta1 = 30.0 * kDeg;
  const Trajectory tr = release(theta1, mu, Seabed::half_plane_step(1.0, 2.0), verify_config());
  double t_cross = tr.back().time;
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::BoundaryCrossing) {
      t_cross = e.time;
      break;
    }
  }
  double before = axis_at(tr.front());
  for (const auto& s : tr.samples) {
    if (s.time < t_cross) before = axis_at(s);
  }
  const double after = fitted_axis(tr, 0, 1);
  const RefractionOutcome want = snell({theta1, 1.0, 2.0, mu});
  const double pre = snell_invariant(1.0, before, mu);
  const double post = snell_invariant(2.0, after, mu);
  const double rel = std::abs(post - pre) / std::abs(pre);
  const double err = std::abs(wrap(after - want.theta2));
  Outcome o;
  o.pass = !tr.terminated_early() && tr.count(EventKind::BoundaryCrossing) >= 2 && rel < 1e-3 &&
           err < 1e-3;
  o.detail = fmt("invariant rel diff %.2e, |theta2 - root| = %.2e rad (root %.6f)", rel, err,
                 want.theta2);
  return o;
}

Outcome reflection_law() {
  const VerifyReport rep = verify_reflection(ReflectionGrid{}, verify_config(), 0);
  Outcome o;
  o.pass = rep.pass && rep.excluded == 0;
  o.detail = fmt("%.0f cases, max error %.2e rad", static_cast<double>(rep.rows.size()), rep.max_error);
  return o;
}

Outcome mirror_trap() {
  const Complex mu{0.0, 1.0};
  const double axis = axis_for_heading(kPi / 2, mu, -1.0);
  IntegratorConfig cfg = verify_config();
  cfg.t_end = 1.0;
  const Trajectory tr = release(axis, mu, Seabed::half_plane_step(-1.0, 1.0), cfg);
  const Event* e = tr.terminal_event();
  Outcome o;
  if (!e || e->kind != EventKind::ZenoTrap) {
    o.detail = "no zeno trap, ended on " + std::string(e ? to_string(e->kind) : "nothing");
    return o;
  }
  // the event location is projected on the mirror; judge the poles themselves
  const auto& z = tr.back().positions;
  const double off = std::max(std::abs(z[0].imag()), std::abs(z[1].imag()));
  o.pass = off < 1e-2;
  o.detail = fmt("zeno trap at t = %.6f, poles within %.2e of the mirror", e->time, off);
  return o;
}

Outcome leapfrog() {
  IntegratorConfig cfg = verify_config();
  cfg.t_end = 1.2;
  const VerifyReport rep = verify_leapfrog(LeapfrogSetup{}, cfg);
  Outcome o;
  o.pass = rep.pass;
  o.detail = fmt("%.0f half-periods, expected advance %.4f, max rel error %.2e",
                 static_cast<double>(rep.rows.size()), rep.rows.front().expected, rep.max_error);
  return o;
}

Outcome collapse() {
  const Complex z{0.7, 0.2}, zp{-0.4, -0.5};
  const Complex mu{-1.0, 0.5}, mup{-0.5, 1.0};
  const PairReduction red = pair_reduction(z, zp, mu, mup);
  const auto want = collapse_time({z - red.center, red.M});
  Outcome o;
  if (!want) {
    o.detail = "pair does not collapse";
    return o;
  }
  const std::vector<Pole> poles{{z, StrengthSpec::simple(mu), "a"}, {zp, StrengthSpec::simple(mup), "b"}};
  IntegratorConfig cfg;
  cfg.t_end = 2.0 * *want;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  const Trajectory tr = integrate(poles, Seabed::constant(1.0), cfg);
  const Event* e = tr.terminal_event();
  if (!e || e->kind != EventKind::Collision) {
    o.detail = "no collision event";
    return o;
  }
  const double rel = std::abs(e->time - *want) / *want;
  o.pass = rel < 1e-4;
  o.detail = fmt("collision at %.9f, analytic %.9f, rel %.2e", e->time, *want, rel);
  return o;
}

Outcome conservation() {
  Outcome o{true, {}};
  double sep = 0.0, noether = 0.0, ham = 0.0;
  int presets = 0;
  std::string bad;
  for (const auto& name : list_presets(default_preset_dir())) {
    const Scenario sc = load_scenario(resolve_scenario(name, default_preset_dir()));
    RunOptions opt;
    const RunResult res = simulate(sc, opt);
    ++presets;
    for (const auto& m : res.members) {
      const Seabed& bed = sc.seabeds[m.member.seabed].seabed;
      const bool s_one = std::holds_alternative<seabeds::Constant>(bed.variant()) &&
                         std::get<seabeds::Constant>(bed.variant()).value == 1.0;
      bool symmetric = bed.symmetry().kind != SymmetryTag::Kind::None;
      bool imaginary = true;
      for (const auto& p : sc.poles()) imaginary = imaginary && p.strength.is_homogeneous(-1) && p.strength.at(-1).real() == 0.0;
      bool saw_sep = false, saw_noether = false, saw_h = false;
      for (const auto& r : m.drift) {
        if (r.name.rfind("separation", 0) == 0) {
          saw_sep = true;
          sep = std::max(sep, r.max_rel_drift);
          if (r.max_rel_drift >= 1e-6) bad += " " + name + ":" + r.name;
        } else if (r.name.rfind("noether", 0) == 0) {
          saw_noether = true;
          noether = std::max(noether, r.max_rel_drift);
          if (r.max_rel_drift >= 1e-6) bad += " " + name + ":" + r.name;
        } else if (r.name.rfind("hamiltonian", 0) == 0) {
          saw_h = true;
          if (s_one) {
            ham = std::max(ham, r.max_rel_drift);
            if (r.max_rel_drift >= 1e-6) bad += " " + name + ":" + r.name;
          }
        }
      }
      const bool pairs = !sc.pairs.empty() || sc.ensemble.has_value();
      if (imaginary && pairs && !saw_sep) bad += " " + name + ":no-separation";
      if (imaginary && symmetric && !saw_noether) bad += " " + name + ":no-noether";
      if (imaginary && s_one && !saw_h) bad += " " + name + ":no-hamiltonian";
    }
  }
  o.pass = bad.empty() && presets > 0;
  o.detail = fmt("%.0f presets; max rel drift separation %.1e, noether %.1e", presets, sep, noether) +
             fmt(", H on S=1 %.1e", ham) + bad;
  return o;
}

Outcome polygon() {
  Outcome o{true, {}};
  double vmax = 0.0, moved = 0.0;
  for (int n = 3; n <= 8; ++n) {
    const Complex mu{0.0, 1.0};
    const auto poles = regular_polygon(n, {}, 4.0, 0.3, mu, immobilizing_center_strength(n, mu));
    SystemState s{0.0, positions_of(poles)};
    const auto v = velocity_general(s, poles);
    double vm = 0.0;
    for (auto c : v) vm = std::max(vm, std::abs(c));
    IntegratorConfig cfg;
    cfg.t_end = 10.0;
    cfg.sample_interval = 0.1;
    const Trajectory tr = integrate(poles, Seabed::constant(1.0), cfg);
    double mv = 0.0;
    for (const auto& st : tr.samples) {
      for (std::size_t k = 0; k < st.size(); ++k) mv = std::max(mv, std::abs(st.positions[k] - poles[k].position));
    }
    vmax = std::max(vmax, vm);
    moved = std::max(moved, mv);
    o.pass = o.pass && vm < 1e-14 && mv < 1e-8 && !tr.terminated_early() && tr.back().time == 10.0;
  }
  o.detail = fmt("N=3..8 at R=4: max |v| %.2e, max displacement over [0,10] %.2e", vmax, moved);
  return o;
}

Outcome trough() {
  const Scenario sc = load_scenario(resolve_scenario("trough", default_preset_dir()));
  RunOptions opt;
  const RunResult res = simulate(sc, opt);
  double peak = 0.0;
  for (const auto& m : res.members) {
    for (const auto& s : m.trajectory.samples) {
      for (auto z : s.positions) peak = std::max(peak, std::abs(z.imag()));
    }
  }
  const auto curves = amplitude_scan(sc, AmplitudeOptions{}, opt);
  const AmplitudeCurve* low = nullptr;
  const AmplitudeCurve* high = nullptr;
  for (const auto& c : curves) {
    if (c.y0 == 0.2) low = &c;
    if (c.y0 == 0.5) high = &c;
  }
  Outcome o;
  if (!low || !high || low->points.size() != high->points.size()) {
    o.detail = "amplitude curves missing";
    return o;
  }
  bool ordered = true, confined = true;
  for (std::size_t k = 0; k < low->points.size(); ++k) {
    ordered = ordered && high->points[k].amplitude >= low->points[k].amplitude - 1e-9;
    confined = confined && low->points[k].confined && high->points[k].confined;
  }
  o.pass = peak < 2.0 && ordered && confined;
  o.detail = fmt("max |Im z| over the preset %.6f; ", peak) +
             (ordered ? "y0=0.5 curve dominates y0=0.2" : "curve ordering violated") +
             fmt(" at %.0f angles", static_cast<double>(low->points.size()));
  return o;
}

Outcome rainbow() {
  RainbowSetup s;
  s.separations = {0.25};
  const VerifyReport rep = verify_rainbow(s, verify_config(), 1);
  const VerifyRow& r = rep.rows.front();
  s.separations = {0.8};
  const VerifyRow wide = verify_rainbow(s, verify_config(), 1).rows.front();
  Outcome o;
  o.pass = r.pass;
  o.detail = fmt("d=0.25: simulated %.4f rad vs 2 arctan((1-r)/d) = %.4f (rel %.2e)", r.simulated, r.expected, r.error) +
             " [" + r.note + "]" + fmt("; d=0.8 for reference: rel %.1e", wide.error);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Snell's law", snell_law},
      {"total internal reflection", total_internal_reflection},
      {"generalized Snell, mu = 1+i", generalized_snell},
      {"law of reflection", reflection_law},
      {"mirror trap", mirror_trap},
      {"leapfrog advance", leapfrog},
      {"self-similar collapse", collapse},
      {"conservation suite", conservation},
      {"polygon immobilization", polygon},
      {"trough confinement", trough},
      {"rainbow", rainbow},
  };
  std::vector<std::size_t> pick;
  for (int a = 1; a < argc; ++a) pick.push_back(static_cast<std::size_t>(std::atoi(argv[a])));
  if (pick.empty()) {
    for (std::size_t k = 1; k <= criteria.size(); ++k) pick.push_back(k);
  }
  int failed = 0;
  for (std::size_t k : pick) {
    if (k < 1 || k > criteria.size()) {
      std::fprintf(stderr, "no criterion %zu\n", k);
      return 2;
    }
    Outcome o;
    try {
      o = criteria[k - 1].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu %-28s %s  %s\n", k, criteria[k - 1].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
