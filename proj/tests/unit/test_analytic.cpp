#include "doctest.h"

#include <cmath>

#include "poledyn/analytic.hpp"

using namespace poledyn;

namespace {

constexpr double kDeg = kPi / 180.0;

// classical RK4 on dZ/dt = M / conj(Z)
Complex rk4_self_similar(Complex z, Complex M, double t, int n) {
  auto f = [&](Complex w) { return M / std::conj(w); };
  const double h = t / n;
  for (int k = 0; k < n; ++k) {
    const Complex k1 = f(z), k2 = f(z + 0.5 * h * k1), k3 = f(z + 0.5 * h * k2), k4 = f(z + h * k3);
    z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return z;
}

}  // namespace

TEST_CASE("self-similar solution against direct integration") {
  for (Complex M : {Complex{-0.3, 0.8}, Complex{0.4, -0.2}, Complex{0.0, 1.0}}) {
    const SelfSimilarSpec spec{{0.6, -0.9}, M};
    const double t = 0.7;
    CHECK(std::abs(self_similar(spec, t) - rk4_self_similar(spec.Z0, M, t, 20000)) < 1e-10);
    // |Z|^2 grows linearly at rate 2 Re M
    CHECK(std::norm(self_similar(spec, t)) == doctest::Approx(std::norm(spec.Z0) + 2 * M.real() * t));
  }
}

TEST_CASE("collapse time") {
  CHECK(*collapse_time({{1.0, 0.0}, {-1.0, 0.0}}) == doctest::Approx(0.5));
  CHECK(*collapse_time({{0.0, 2.0}, {-0.5, 3.0}}) == doctest::Approx(4.0));
  CHECK_FALSE(collapse_time({{1.0, 0.0}, {0.0, 1.0}}));
  CHECK_FALSE(collapse_time({{1.0, 0.0}, {0.2, 1.0}}));
  CHECK_THROWS_AS(self_similar({{1.0, 0.0}, {-1.0, 0.0}}, 0.6), DomainError);
}

TEST_CASE("pair reduction, parallel case") {
  const auto r = pair_reduction({1, 0}, {0, 0}, {0, 1}, {0, -1});
  CHECK(r.parallel);
  // conj(-i) / conj(1)
  CHECK(std::abs(r.velocity - Complex(0, 1)) < 1e-15);
}

TEST_CASE("polygon immobilizing strength") {
  for (int n = 2; n <= 9; ++n) {
    const Complex mu{0.3, -1.1};
    const Complex c = immobilizing_center_strength(n, mu);
    CHECK(std::abs(c + static_cast<double>(n - 1) * mu / 2.0) < 1e-15);
    CHECK(polygon_reduction(n, mu, c).immobilized);
    CHECK_FALSE(polygon_reduction(n, mu, c + 0.01).immobilized);
  }
  CHECK_THROWS_AS(polygon_reduction(1, 1.0, 1.0), DomainError);
}

TEST_CASE("Snell for vortex pairs") {
  const auto r = snell({30 * kDeg, 1.0, 2.0, {0, 1}});
  CHECK(r.kind == OutcomeKind::Refracted);
  CHECK(std::sin(r.theta2) == doctest::Approx(0.25));
  for (double deg : {10.0, 20.0, 40.0, 60.0, 80.0}) {
    const auto q = snell({deg * kDeg, 1.0, 2.0, {0, 1}});
    CHECK(1.0 * std::sin(deg * kDeg) == doctest::Approx(2.0 * std::sin(q.theta2)).epsilon(1e-12));
  }
}

TEST_CASE("total internal reflection beyond the critical angle") {
  CHECK(critical_angle(2.0, 1.0) == doctest::Approx(kPi / 6));
  CHECK(snell({25 * kDeg, 2.0, 1.0, {0, 1}}).kind == OutcomeKind::Refracted);
  const auto r = snell({35 * kDeg, 2.0, 1.0, {0, 1}});
  CHECK(r.kind == OutcomeKind::Reflected);
  CHECK(r.theta2 == doctest::Approx(kPi - 35 * kDeg));
  CHECK_THROWS_AS(critical_angle(1.0, 2.0), DomainError);
}

TEST_CASE("generalized Snell conserves the invariant") {
  for (Complex mu : {Complex{1, 1}, Complex{-0.5, 1}, Complex{0.3, -2}}) {
    for (double deg : {10.0, 30.0, 50.0}) {
      for (double s2 : {0.5, 2.0, 3.0}) {
        const BoundaryInteraction b{deg * kDeg, 1.0, s2, mu};
        const auto r = snell(b);
        CAPTURE(mu);
        CAPTURE(deg);
        CAPTURE(s2);
        const double pre = snell_invariant(1.0, b.theta1, mu);
        const double post = r.kind == OutcomeKind::Refracted ? snell_invariant(s2, r.theta2, mu)
                                                             : snell_invariant(1.0, r.theta2, mu);
        CHECK(post == doctest::Approx(pre).epsilon(1e-9));
      }
    }
  }
  // Re mu = 0 reduces to the plain law
  CHECK(snell_invariant(2.0, 0.4, {0, 1}) == doctest::Approx(2.0 * std::sin(0.4)));
}

TEST_CASE("generalized Snell root for mu = 1 + i") {
  // s2 sin(t2) e^-t2 = s1 sin(t1) e^-t1, solved here by bisection on (0, pi/4)
  const double target = std::sin(kPi / 6) * std::exp(-kPi / 6) / 2.0;
  double a = 0.0, b = kPi / 4;
  for (int k = 0; k < 200; ++k) {
    const double m = 0.5 * (a + b);
    (std::sin(m) * std::exp(-m) < target ? a : b) = m;
  }
  const auto r = snell({kPi / 6, 1.0, 2.0, {1, 1}});
  CHECK(r.kind == OutcomeKind::Refracted);
  CHECK(r.theta2 == doctest::Approx(a).epsilon(1e-10));
}

TEST_CASE("law of reflection") {
  for (double deg : {15.0, 45.0, 75.0}) {
    for (Complex mu : {Complex{0, 1}, Complex{0, -1}}) {
      const auto r = reflect({deg * kDeg, 1.0, 1.0, mu});
      CHECK(r.kind == OutcomeKind::Reflected);
      CHECK(r.theta2 == doctest::Approx(kPi - deg * kDeg));
    }
  }
  CHECK(reflect({0.0, 1.0, 1.0, {0, 1}}).kind == OutcomeKind::Trapped);
  const auto g = reflect({0.4, 1.0, 1.0, {0.5, 1}});
  CHECK(std::sin(g.theta2) * std::exp(-0.5 * g.theta2) ==
        doctest::Approx(std::sin(0.4) * std::exp(-0.5 * 0.4)).epsilon(1e-10));
}

TEST_CASE("leapfrog advance") {
  const Complex a = leapfrog_advance(1.0, 3.0, {0.0, 0.5});
  CHECK(a.real() == 0.0);
  CHECK(a.imag() == doctest::Approx(0.25));
  CHECK(leapfrog_advance(3.0, 1.0, {7.0, -0.5}).imag() == doctest::Approx(-0.25));
}

TEST_CASE("rainbow angle") {
  CHECK(rainbow_angle(0.5, 0.25) == doctest::Approx(2.0 * std::atan(2.0)));
  CHECK(rainbow_angle(0.5, 0.8) == doctest::Approx(2.0 * std::atan(0.625)));
  CHECK_THROWS_AS(rainbow_angle(0.5, 0.0), DomainError);
}

TEST_CASE("reflected axis crossing against explicit ray geometry") {
  const double R = 2.0;
  for (double x : {0.01, 0.1, 0.5, 1.0, 1.3}) {
    const double y = std::sqrt(R * R - x * x);
    const Complex n{x / R, y / R};
    const Complex d{0.0, 1.0};
    const double dn = d.real() * n.real() + d.imag() * n.imag();
    const Complex r = d - 2.0 * dn * n;
    const double s = -x / r.real();
    CHECK(reflected_axis_crossing(R, x) == doctest::Approx(y + s * r.imag()).epsilon(1e-12));
  }
  CHECK(reflected_axis_crossing(R, 0.1) == doctest::Approx(1.00125).epsilon(1e-5));
  CHECK_THROWS_AS(reflected_axis_crossing(R, 2.5), DomainError);
}

TEST_CASE("caustic points lie on their reflected rays and are tangent to them") {
  const double R = 2.0;
  for (double phi : {0.2, 0.5, 0.9}) {
    const Complex hit = R * Complex{std::sin(phi), std::cos(phi)};
    const Complex dir{-std::sin(2 * phi), -std::cos(2 * phi)};
    const Complex c = circle_caustic(R, phi);
    const Complex rel = c - hit;
    CHECK(std::abs(rel.real() * dir.imag() - rel.imag() * dir.real()) < 1e-12);
    const double h = 1e-6;
    const Complex tangent = circle_caustic(R, phi + h) - circle_caustic(R, phi - h);
    CHECK(std::abs(tangent.real() * dir.imag() - tangent.imag() * dir.real()) < 1e-9 * std::abs(tangent) + 1e-15);
  }
  // paraxial focus at half the radius
  CHECK(std::abs(circle_caustic(R, 0.0) - Complex(0.0, 1.0)) < 1e-15);
}
