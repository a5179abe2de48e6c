#include "doctest.h"

#include <cmath>

#include "poledyn/dynamics.hpp"
#include "poledyn/integrator.hpp"

using namespace poledyn;

namespace {

// y' = i y, exact y = exp(i t)
const RhsFn kSpin = [](std::span<const Complex> z, std::span<Complex> dz) {
  for (std::size_t k = 0; k < z.size(); ++k) dz[k] = Complex{0, 1} * z[k];
};

double step_error(bool dopri, double h) {
  std::vector<Complex> y0{1.0}, f0{Complex{0, 1}};
  const auto r = dopri ? StepKernel::dopri5(kSpin, 0.0, y0, f0, h, 1e-9, 1e-12)
                       : StepKernel::rk4(kSpin, 0.0, y0, f0, h);
  return std::abs(r.y1[0] - std::polar(1.0, h));
}

std::vector<Pole> vortex_pair(Complex a, Complex b, Complex mu_a, Complex mu_b) {
  return {{a, StrengthSpec::simple(mu_a), "a"}, {b, StrengthSpec::simple(mu_b), "b"}};
}

}  // namespace

TEST_CASE("local error orders of the steppers") {
  // local error ~ h^(p+1): halving h divides it by 2^(p+1)
  const double d5 = step_error(true, 0.2) / step_error(true, 0.1);
  const double r4 = step_error(false, 0.2) / step_error(false, 0.1);
  CHECK(d5 == doctest::Approx(64.0).epsilon(0.1));
  CHECK(r4 == doctest::Approx(32.0).epsilon(0.1));
}

TEST_CASE("dense output interpolates the step") {
  std::vector<Complex> y0{1.0}, f0{Complex{0, 1}};
  const double h = 0.05;
  const auto r = StepKernel::dopri5(kSpin, 0.0, y0, f0, h, 1e-9, 1e-12);
  CHECK(std::abs(r.dense.eval(0.0)[0] - 1.0) < 1e-15);
  CHECK(std::abs(r.dense.eval(1.0)[0] - r.y1[0]) < 1e-14);
  for (double th : {0.25, 0.5, 0.8}) CHECK(std::abs(r.dense.eval(th)[0] - std::polar(1.0, th * h)) < 1e-9);
}

TEST_CASE("config validation names the field") {
  IntegratorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rel_tol = -1.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("rel_tol"), Error);
  cfg = IntegratorConfig{};
  cfg.t_end = std::nan("");
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK(method_from_string("rk4") == Method::Rk4);
  CHECK_THROWS(method_from_string("euler"));
}

TEST_CASE("co-rotating vortices against the exact rotation") {
  // equal vortices at +-1 spin about the origin at rate Im(mu)/|d|^2
  const auto poles = vortex_pair({1, 0}, {-1, 0}, {0, 1}, {0, 1});
  IntegratorConfig cfg;
  cfg.t_end = 3.0;
  const Trajectory tr = integrate(poles, Seabed::constant(1.0), cfg);
  REQUIRE(tr.terminal_event()->kind == EventKind::Horizon);
  for (const auto& s : tr.samples) {
    const Complex want = std::polar(1.0, -s.time / 2.0);
    CHECK(std::abs(s.positions[0] - want) < 1e-8);
  }
  CHECK(tr.back().time == 3.0);
}

TEST_CASE("an opposite pair translates rigidly") {
  const Complex mu{0, 1};
  const auto poles = vortex_pair({-0.05, 0}, {0.05, 0}, -mu, mu);
  IntegratorConfig cfg;
  cfg.t_end = 0.5;
  for (auto m : {Method::Dopri5, Method::Rk4}) {
    cfg.method = m;
    const Trajectory tr = integrate(poles, Seabed::constant(2.0), cfg);
    // v = conj(mu S) / conj(z_a - z_b) = (-i)(2)/(-0.1)
    const Complex v = std::conj(mu * 2.0) / std::conj(Complex{-0.1, 0});
    CHECK(std::abs(tr.back().positions[0] - (Complex{-0.05, 0} + v * 0.5)) < 1e-9);
  }
}

TEST_CASE("crossings are located on the straight segment") {
  const Seabed bed = Seabed::half_plane_step(1.0, 2.0);
  SystemState a{0.0, {{0.0, -1.0}, {5.0, 5.0}}}, b{1.0, {{1.0, 3.0}, {5.0, 5.0}}};
  const std::vector<std::string> labels{"m", "p"};
  const Crossing c = locate_crossing(a, b, labels, bed);
  CHECK(c.time == doctest::Approx(0.25).epsilon(1e-10));
  REQUIRE(c.poles.size() == 1);
  CHECK(c.poles[0] == "m");
  CHECK(std::abs(c.locations[0] - Complex(0.25, 0.0)) < 1e-10);
  SystemState none{1.0, {{0.0, -0.5}, {5.0, 5.0}}};
  CHECK_THROWS_AS(locate_crossing(a, none, labels, bed), Error);
}

TEST_CASE("a refracting pair records crossings of both poles") {
  const Complex mu{0, 1};
  const auto poles = vortex_pair({-0.025, -0.1}, {0.025, -0.1}, -mu, mu);
  IntegratorConfig cfg;
  cfg.t_end = 0.1;
  const Trajectory tr = integrate(poles, Seabed::half_plane_step(1.0, 2.0), cfg);
  CHECK(tr.count(EventKind::BoundaryCrossing) == 2);
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::BoundaryCrossing) CHECK(std::abs(e.location.imag()) < 1e-12);
  }
  CHECK(tr.back().positions[0].imag() > 0.0);
}

TEST_CASE("head-on incidence on a mirror is a zeno trap") {
  const Complex mu{0, 1};
  // S < 0 below: the pair with the minus pole on the right travels up
  const auto poles = vortex_pair({0.025, -0.1}, {-0.025, -0.1}, -mu, mu);
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  const Trajectory tr = integrate(poles, Seabed::half_plane_step(-1.0, 1.0), cfg);
  REQUIRE(tr.terminal_event());
  CHECK(tr.terminal_event()->kind == EventKind::ZenoTrap);
  CHECK(tr.terminated_early());
}

TEST_CASE("collapse ends the run with a collision") {
  const auto poles = vortex_pair({1, 0}, {-1, 0}, -1.0, -1.0);
  IntegratorConfig cfg;
  cfg.t_end = 5.0;
  const Trajectory tr = integrate(poles, Seabed::constant(1.0), cfg);
  REQUIRE(tr.terminal_event());
  CHECK(tr.terminal_event()->kind == EventKind::Collision);
  // |d|^2 shrinks at rate 2 Re(mu + mu') = -4 from 4
  CHECK(tr.terminal_event()->time == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("negated strengths retrace the motion") {
  const Complex mu{0, 1};
  const auto poles = vortex_pair({-0.1, -0.3}, {0.1, -0.25}, -mu, mu);
  const Seabed bed = Seabed::half_plane_step(1.0, 1.5);
  IntegratorConfig cfg;
  cfg.t_end = 0.15;
  cfg.rel_tol = 1e-11;
  cfg.abs_tol = 1e-13;
  const Trajectory fwd = integrate(poles, bed, cfg);
  REQUIRE(fwd.count(EventKind::BoundaryCrossing) > 0);
  auto back_poles = time_reversed(poles);
  SystemState start{0.0, fwd.back().positions};
  const Trajectory back = integrate(start, back_poles, bed, cfg);
  for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(back.back().positions[k] - poles[k].position) < 1e-7);
}

TEST_CASE("ensembles are independent of the thread count") {
  const Complex mu{0, 1};
  const auto poles = vortex_pair({-0.025, -0.1}, {0.025, -0.1}, -mu, mu);
  std::vector<SystemState> initials;
  for (int k = 0; k < 12; ++k) {
    const Complex shift{0.01 * k, -0.005 * k};
    const Complex tilt = std::polar(0.025, 0.05 * k);
    initials.push_back({0.0, {shift - tilt, shift + tilt}});
  }
  IntegratorConfig cfg;
  cfg.t_end = 0.1;
  const Seabed bed = Seabed::half_plane_step(1.0, 2.0);
  const auto one = integrate_ensemble(initials, poles, bed, cfg, 1);
  const auto many = integrate_ensemble(initials, poles, bed, cfg, 4);
  REQUIRE(one.size() == many.size());
  for (std::size_t m = 0; m < one.size(); ++m) {
    REQUIRE(one[m].samples.size() == many[m].samples.size());
    for (std::size_t k = 0; k < one[m].samples.size(); ++k) {
      CHECK(one[m].samples[k].positions == many[m].samples[k].positions);
    }
  }
}
