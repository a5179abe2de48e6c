#include "doctest.h"

#include <cmath>

#include "poledyn/integrator.hpp"
#include "poledyn/invariants.hpp"

using namespace poledyn;

TEST_CASE("log Hamiltonian, hand value") {
  SystemState s{0.0, {{0, 0}, {2, 0}}};
  const std::vector<Complex> mu{{0, 1}, {0, 1}};
  // Re(i * i * log 2)
  CHECK(hamiltonian_homogeneous(s, mu, -1) == doctest::Approx(-std::log(2.0)));
  // n0 = 1: G = d^2 / 2
  CHECK(hamiltonian_homogeneous(s, std::vector<Complex>{1.0, 1.0}, 1) == doctest::Approx(2.0));
  // seabed weights multiply in
  CHECK(hamiltonian_seabed(s, mu, Seabed::constant(3.0)) == doctest::Approx(-9.0 * std::log(2.0)));
}

TEST_CASE("centers of strength") {
  SystemState s{0.0, {{1, 0}, {0, 1}, {-1, -1}}};
  const std::vector<Complex> mu{1.0, 1.0, 2.0};
  CHECK(std::abs(center_of_strength(s, mu) - Complex(-0.25, -0.25)) < 1e-15);
  CHECK_THROWS_AS(center_of_strength(s, std::vector<Complex>{1.0, -1.0, 0.0}), ZeroTotalStrength);
  const std::vector<std::size_t> a{0}, b{1, 2};
  // (1) - (0 + i + 2(-1-i)) / 3
  CHECK(std::abs(subcenter_difference(s, mu, a, b) - (Complex(1, 0) - Complex(-2, -1) / 3.0)) < 1e-15);
  CHECK_THROWS_AS(subcenter_difference(s, std::vector<Complex>{1.0, 1.0, -1.0}, a, b), ZeroSubtotalStrength);
}

TEST_CASE("even-degree pair invariant") {
  CHECK(even_degree_pair_invariant({1, 2}, {3, 0}, {0, 1}, 2.0) == Complex(0, -1) * Complex(1, 2) - 2.0 * Complex(3, 0));
}

TEST_CASE("Noether momentum requirements") {
  SystemState s{0.0, {{0, -1}, {0.1, -1}}};
  const std::vector<Complex> mu{{0, -1}, {0, 1}};
  const Seabed step = Seabed::half_plane_step(1.0, 2.0);
  // sigma(p) = p below the step: -(i(-i)(-1) + i(i)(-1)) = 0
  CHECK(noether_momentum(s, mu, step) == doctest::Approx(0.0));
  SystemState t{0.0, {{0, -1}, {0, 1}}};
  // sigma(-1) = -1, sigma(1) = 2: -(i(-i)(-1) + i(i)(2)) = 3
  CHECK(noether_momentum(t, mu, step) == doctest::Approx(3.0));
  CHECK_THROWS_AS(noether_momentum(s, std::vector<Complex>{1.0, {0, 1}}, step), NonImaginaryStrength);
  CHECK_THROWS_AS(noether_momentum(s, mu, Seabed(seabeds::ArcMirror{})), NoSymmetry);
}

TEST_CASE("quantity names round-trip") {
  for (auto q : {Quantity::Hamiltonian, Quantity::CenterOfStrength, Quantity::SubcenterDifference,
                 Quantity::EvenDegreeInvariant, Quantity::Separation, Quantity::NoetherMomentum}) {
    CHECK(quantity_from_string(to_string(q)) == q);
  }
  CHECK(piecewise_conserved(Quantity::Hamiltonian));
  CHECK_FALSE(piecewise_conserved(Quantity::NoetherMomentum));
}

TEST_CASE("conservation across a refraction") {
  const Complex mu{0, 1};
  std::vector<Pole> poles{{{-0.0217, -0.1125}, StrengthSpec::simple(-mu), "m"},
                          {{0.0217, -0.0875}, StrengthSpec::simple(mu), "p"}};
  const Seabed bed = Seabed::half_plane_step(1.0, 2.0);
  IntegratorConfig cfg;
  cfg.t_end = 0.1;
  const Trajectory tr = integrate(poles, bed, cfg);
  REQUIRE(tr.count(EventKind::BoundaryCrossing) == 2);
  const std::vector<Complex> mus{-mu, mu};

  QuantitySelector noether;
  noether.quantity = Quantity::NoetherMomentum;
  noether.mus = mus;
  noether.seabed = bed;
  const auto n = drift_report(tr, noether);
  CHECK(n.max_rel_drift < 1e-6);
  CHECK(n.per_segment.size() == 1);

  QuantitySelector sep;
  sep.quantity = Quantity::Separation;
  CHECK(drift_report(tr, sep).max_rel_drift < 1e-6);

  // H holds piecewise, so it is split at the crossing events
  QuantitySelector h;
  h.quantity = Quantity::Hamiltonian;
  h.mus = mus;
  h.seabed = bed;
  const auto hr = drift_report(tr, h);
  CHECK(hr.per_segment.size() >= 2);
  CHECK(hr.max_rel_drift < 1e-6);
}

TEST_CASE("rotational Noether momentum on a radial step") {
  const Complex mu{0, 1};
  // plus pole below: the pair heads along +x and grazes the disk
  std::vector<Pole> poles{{{-1.5, 0.4}, StrengthSpec::simple(-mu), "m"},
                          {{-1.5, 0.3}, StrengthSpec::simple(mu), "p"}};
  const Seabed bed = Seabed::radial_step(0.6, 2.0, 1.0);
  IntegratorConfig cfg;
  cfg.t_end = 0.6;
  const Trajectory tr = integrate(poles, bed, cfg);
  CHECK(tr.count(EventKind::BoundaryCrossing) >= 2);
  QuantitySelector q;
  q.quantity = Quantity::NoetherMomentum;
  q.mus = {-mu, mu};
  q.seabed = bed;
  CHECK(drift_report(tr, q).max_rel_drift < 1e-6);
}

TEST_CASE("drift report rejects bad selectors") {
  Trajectory tr;
  tr.labels = {"a", "b"};
  tr.samples.push_back({0.0, {{0, 0}, {1, 0}}});
  QuantitySelector q;
  q.quantity = Quantity::Separation;
  q.second = 5;
  CHECK_THROWS_AS(drift_report(tr, q), Error);
}
