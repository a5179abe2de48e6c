#include "doctest.h"

#include <cmath>
#include <random>

#include "poledyn/analytic.hpp"
#include "poledyn/dynamics.hpp"
#include "poledyn/kernels.hpp"

using namespace poledyn;

namespace {

// direct evaluation of the fixed-strength field, no kernels involved
std::vector<Complex> oracle(const std::vector<Complex>& z, const std::vector<Complex>& mu,
                            const std::vector<double>& s) {
  std::vector<Complex> v(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (i != j) v[i] += std::conj(mu[j] * s[j]) / std::conj(z[i] - z[j]);
    }
  }
  return v;
}

struct Cloud {
  std::vector<Complex> z, mu;
};

Cloud random_cloud(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Cloud c;
  for (std::size_t k = 0; k < n; ++k) {
    c.z.push_back({3 * u(rng), 3 * u(rng)});
    c.mu.push_back({u(rng), u(rng)});
  }
  return c;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_CASE("two poles, hand values") {
  SystemState s{0.0, {{0, 0}, {1, 0}}};
  const std::vector<Complex> mu{{0, 1}, {0, 1}};
  const auto v = velocity_fixed(s, mu);
  CHECK(std::abs(v[0] - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(v[1] - Complex(0, -1)) < 1e-15);
  // a source pushes the other pole away
  const auto w = velocity_fixed(s, std::vector<Complex>{1.0, 0.0});
  CHECK(std::abs(w[1] - Complex(1, 0)) < 1e-15);
}

TEST_CASE("fixed field matches the direct sum") {
  for (std::size_t n : {2u, 3u, 5u, 9u, 33u}) {
    const Cloud c = random_cloud(n, 7 + static_cast<unsigned>(n));
    const auto v = velocity_fixed({0.0, c.z}, c.mu);
    CHECK(max_diff(v, oracle(c.z, c.mu, std::vector<double>(n, 1.0))) < 1e-12);
  }
}

TEST_CASE("seabed field scales every source by S at the source") {
  const Cloud c = random_cloud(6, 3);
  const Seabed bed = Seabed::half_plane_step(0.5, 3.0);
  std::vector<double> s;
  for (auto z : c.z) s.push_back(bed(z));
  CHECK(max_diff(velocity_seabed({0.0, c.z}, c.mu, bed), oracle(c.z, c.mu, s)) < 1e-12);
}

TEST_CASE("general field reduces to the fixed field for simple strengths") {
  const Cloud c = random_cloud(5, 11);
  std::vector<Pole> poles;
  for (std::size_t k = 0; k < c.z.size(); ++k) {
    poles.push_back({c.z[k], StrengthSpec::simple(c.mu[k]), "p" + std::to_string(k)});
  }
  CHECK(max_diff(velocity_general({0.0, c.z}, poles), velocity_fixed({0.0, c.z}, c.mu)) < 1e-12);
}

TEST_CASE("general field with a higher exponent") {
  std::vector<Pole> poles{{{0, 0}, StrengthSpec::homogeneous(-2, {0, 1}), "a"},
                          {{2, 0}, StrengthSpec::homogeneous(-2, 1.0), "b"}};
  const auto v = velocity_general({0.0, {{0, 0}, {2, 0}}}, poles);
  // conj(mu_b (z_a - z_b)^-2) = conj(1/4)
  CHECK(std::abs(v[0] - Complex(0.25, 0)) < 1e-15);
  // conj(i / 4)
  CHECK(std::abs(v[1] - Complex(0, -0.25)) < 1e-15);
}

TEST_CASE("equivariance under translation, rotation and scaling") {
  const Cloud c = random_cloud(7, 5);
  const auto v = velocity_fixed({0.0, c.z}, c.mu);
  const Complex rot = std::polar(1.0, 0.83), shift{1.5, -2.0};
  const double scale = 2.5;
  std::vector<Complex> moved;
  for (auto z : c.z) moved.push_back(scale * rot * z + shift);
  const auto w = velocity_fixed({0.0, moved}, c.mu);
  std::vector<Complex> expect;
  for (auto x : v) expect.push_back(rot * x / scale);
  CHECK(max_diff(w, expect) < 1e-12);
}

TEST_CASE("strength-weighted velocities sum to zero") {
  const Cloud c = random_cloud(9, 13);
  const auto v = velocity_fixed({0.0, c.z}, c.mu);
  Complex sum{};
  for (std::size_t k = 0; k < v.size(); ++k) sum += std::conj(c.mu[k]) * v[k];
  CHECK(std::abs(sum) < 1e-12);
}

TEST_CASE("a vortex induces motion perpendicular to the separation") {
  SystemState s{0.0, {{0.3, -0.2}, {1.7, 0.9}}};
  const std::vector<Complex> mu{{0, 0}, {0, 2.5}};
  const auto v = velocity_fixed(s, mu);
  const Complex d = s.positions[0] - s.positions[1];
  CHECK(std::abs(d.real() * v[0].real() + d.imag() * v[0].imag()) < 1e-14);
}

TEST_CASE("the pair reduction reproduces the field") {
  const Complex z{0.4, 0.9}, zp{-0.3, 0.1}, mu{0.3, 1.2}, mup{-0.8, 0.5};
  const auto red = pair_reduction(z, zp, mu, mup);
  const auto v = velocity_fixed({0.0, {z, zp}}, std::vector<Complex>{mu, mup});
  CHECK(std::abs(v[0] - red.M / std::conj(z - red.center)) < 1e-13);
}

TEST_CASE("regular polygon reduces to one complex rate") {
  for (int n = 3; n <= 8; ++n) {
    const Complex mu{0.2, 1.0}, mup{-0.4, 0.3};
    const auto poles = regular_polygon(n, {0.5, -0.5}, 1.3, 0.2, mu, mup);
    const auto v = velocity_general({0.0, positions_of(poles)}, poles);
    const auto red = polygon_reduction(n, mu, mup);
    for (int k = 0; k < n; ++k) {
      const Complex rel = poles[static_cast<std::size_t>(k)].position - Complex{0.5, -0.5};
      CHECK(std::abs(v[static_cast<std::size_t>(k)] - red.M / std::conj(rel)) < 1e-13);
    }
    CHECK(std::abs(v.back()) < 1e-13);
  }
}

TEST_CASE("collisions throw") {
  SystemState s{0.0, {{0, 0}, {1e-12, 0}}};
  CHECK_THROWS_AS(velocity_fixed(s, std::vector<Complex>{1.0, 1.0}), CollisionError);
  CHECK_THROWS_AS(check_collision(s.positions, 1e-9), CollisionError);
}

TEST_CASE("vector kernels agree with the scalar kernel") {
  for (auto isa : {kernels::Isa::Avx2, kernels::Isa::Neon}) {
    if (!kernels::supported(isa)) continue;
    CAPTURE(kernels::name(isa));
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 31u, 64u, 257u}) {
      CAPTURE(n);
      const Cloud c = random_cloud(n, 100 + static_cast<unsigned>(n));
      std::vector<Complex> w;
      for (auto m : c.mu) w.push_back(std::conj(m));
      std::vector<Complex> a(n), b(n);
      const double da = kernels::induced_velocity(kernels::Isa::Scalar, c.z, w, a);
      const double db = kernels::induced_velocity(isa, c.z, w, b);
      CHECK((std::isinf(da) ? std::isinf(db) : da == doctest::Approx(db).epsilon(1e-14)));
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(std::abs(a[k] - b[k]) <= 1e-12 * (1.0 + std::abs(a[k])));
      }
      const double ma = kernels::min_separation_sq(kernels::Isa::Scalar, c.z);
      const double mb = kernels::min_separation_sq(isa, c.z);
      CHECK((std::isinf(ma) ? std::isinf(mb) : ma == doctest::Approx(mb).epsilon(1e-14)));
    }
  }
}

TEST_CASE("kernel selection") {
  CHECK(kernels::supported(kernels::Isa::Scalar));
  const auto before = kernels::active();
  kernels::set_active(kernels::Isa::Scalar);
  CHECK(kernels::active() == kernels::Isa::Scalar);
  kernels::set_active(before);
  CHECK(kernels::name(kernels::Isa::Avx2) == "avx2");
}
