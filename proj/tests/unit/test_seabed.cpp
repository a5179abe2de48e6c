#include "doctest.h"

#include <cmath>

#include "poledyn/seabed.hpp"

using namespace poledyn;
using Closure = PiecewiseLinearProfile::Closure;

TEST_CASE("step profile and its closure") {
  const auto up = PiecewiseLinearProfile::step(0.5, 1.0, 2.0);
  CHECK(up(0.4) == 1.0);
  CHECK(up(0.5) == 2.0);
  CHECK(up(0.6) == 2.0);
  const auto low = PiecewiseLinearProfile::step(0.5, 1.0, 2.0, Closure::Lower);
  CHECK(low(0.5) == 1.0);
  CHECK(up.jumps_at(0));
  CHECK(up.piecewise_constant());
}

TEST_CASE("interpolated profile is continuous and flat beyond the ends") {
  const auto p = PiecewiseLinearProfile::interpolate({0.0, 1.0, 3.0}, {1.0, 3.0, -1.0});
  CHECK(p(-5.0) == 1.0);
  CHECK(p(0.5) == doctest::Approx(2.0));
  CHECK(p(2.0) == doctest::Approx(1.0));
  CHECK(p(7.0) == doctest::Approx(-1.0));
  CHECK_FALSE(p.has_jumps());
  CHECK_FALSE(p.piecewise_constant());
}

TEST_CASE("profile integral against a midpoint-rule oracle") {
  const auto p = PiecewiseLinearProfile::interpolate({-1.0, 0.3, 2.0}, {2.0, -1.0, 0.5});
  const double a = -2.0, b = 2.7;
  const int n = 200000;
  double q = 0.0;
  for (int k = 0; k < n; ++k) q += p(a + (k + 0.5) * (b - a) / n);
  q *= (b - a) / n;
  CHECK(p.integral(a, b) == doctest::Approx(q).epsilon(1e-8));
  CHECK(p.integral(b, a) == doctest::Approx(-q).epsilon(1e-8));
  CHECK(p.antiderivative(0.0) == 0.0);
}

TEST_CASE("seabed antiderivative has derivative S along the symmetry coordinate") {
  const std::vector<Seabed> beds{
      Seabed::half_plane_step(1.0, 2.0),
      Seabed::linear_of_im(0.7, -0.2),
      Seabed::radial_step(1.0, 2.0, 1.0),
      Seabed(seabeds::ProfileOfAbsIm{PiecewiseLinearProfile::interpolate({0.0, 2.0}, {-2.0, 0.0})}),
      Seabed(seabeds::RadialProfile{PiecewiseLinearProfile::interpolate({0.0, 4.0}, {1.0, 3.0}), {0.5, 0.5}}),
      Seabed::constant(1.5)};
  const std::vector<Complex> probes{{0.3, 0.4}, {-0.2, -0.7}, {1.1, 1.3}, {0.0, 1.5}};
  for (const auto& bed : beds) {
    CAPTURE(bed.describe());
    const auto sigma = bed.antiderivative();
    for (auto z : probes) {
      const double u = bed.symmetry_coordinate(z);
      const double h = 1e-6;
      const double slope = (sigma(u + h) - sigma(u - h)) / (2 * h);
      // S as a function of the symmetry coordinate, sampled through z
      double s = bed(z);
      if (std::holds_alternative<seabeds::RadialStep>(bed.variant()) && std::abs(std::abs(z) - 1.0) < 1e-3) continue;
      CHECK(slope == doctest::Approx(s).epsilon(1e-6));
    }
  }
}

TEST_CASE("regions and region values") {
  const Seabed bed = Seabed::half_plane_step(1.0, 3.0, 0.5);
  CHECK(bed.region_of({0, 0}) != bed.region_of({0, 1}));
  CHECK(bed.value_in(bed.region_of({0, 1}), {0, -4}) == 3.0);
  CHECK(bed.piecewise_constant());
  CHECK(bed.has_discontinuities());
  CHECK_FALSE(Seabed::linear_of_im(1.0).has_discontinuities());
}

TEST_CASE("crossing fraction and projection on a step line") {
  const Seabed bed = Seabed::half_plane_step(1.0, 2.0);
  auto f = bed.crossing_fraction({0.0, -1.0}, {1.0, 3.0});
  REQUIRE(f);
  CHECK(*f == doctest::Approx(0.25));
  CHECK_FALSE(bed.crossing_fraction({0.0, -1.0}, {1.0, -0.5}));
  CHECK(bed.project_to_locus({2.0, 0.3}) == Complex(2.0, 0.0));
}

TEST_CASE("crossing fraction on a circle against the quadratic oracle") {
  const Seabed bed = Seabed::radial_step(0.5, 2.0, 1.0, {0.2, 0.1});
  const Complex a{-1.0, 0.0}, b{1.0, 0.3};
  auto f = bed.crossing_fraction(a, b);
  REQUIRE(f);
  const Complex d = b - a, w = a - Complex{0.2, 0.1};
  const double A = std::norm(d), B = 2 * (w.real() * d.real() + w.imag() * d.imag()), C = std::norm(w) - 0.25;
  const double t = (-B - std::sqrt(B * B - 4 * A * C)) / (2 * A);
  CHECK(*f == doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("symmetry tags") {
  CHECK(Seabed::half_plane_step(1, 2).symmetry().kind == SymmetryTag::Kind::Translation);
  CHECK(Seabed::radial_step(1, 2, 1).symmetry().kind == SymmetryTag::Kind::Rotation);
  seabeds::ArcMirror arc;
  const Seabed m(arc);
  CHECK(m.symmetry().kind == SymmetryTag::Kind::None);
  CHECK_THROWS_AS(m.antiderivative(), NoSymmetry);
  CHECK_THROWS_AS(m.symmetry_coordinate({0, 0}), NoSymmetry);
}

TEST_CASE("arc mirror values") {
  seabeds::ArcMirror arc;
  arc.radius = 2.0;
  const Seabed m(arc);
  CHECK(m({0.0, 0.0}) == 1.0);   // inside the circle
  CHECK(m({0.0, 3.0}) == -1.0);  // behind the arc
  CHECK(m({0.0, -3.0}) == 1.0);  // outside the span
}

TEST_CASE("negated seabed") {
  const Seabed bed = Seabed::half_plane_step(1.0, 2.0).negated();
  CHECK(bed({0, -1}) == -1.0);
  CHECK(bed({0, 1}) == -2.0);
}
