#include "doctest.h"

#include <cmath>
#include <limits>

#include "poledyn/types.hpp"

using namespace poledyn;

TEST_CASE("strength spec keeps coefficients by exponent") {
  const auto s = StrengthSpec::simple({0.0, 2.0});
  CHECK(s.at(-1) == Complex(0.0, 2.0));
  CHECK(s.at(0) == Complex{});
  CHECK(s.is_homogeneous(-1));
  CHECK_FALSE(s.is_homogeneous(1));

  StrengthSpec mixed;
  mixed.coefficients[-1] = 1.0;
  mixed.coefficients[1] = {0.0, 1.0};
  CHECK_FALSE(mixed.is_homogeneous(-1));
}

TEST_CASE("pairwise separations cover every unordered pair once") {
  SystemState s{0.0, {{0, 0}, {3, 0}, {0, 4}}};
  const std::vector<std::string> labels{"a", "b", "c"};
  const auto seps = pairwise_separations(s, labels);
  REQUIRE(seps.size() == 3);
  CHECK(seps[0].first == "a");
  CHECK(seps[0].second == "b");
  CHECK(seps[0].distance == 3.0);
  CHECK(seps[2].distance == 5.0);
  CHECK(min_separation(s.positions) == 3.0);
}

TEST_CASE("validation rejects duplicate labels and non-finite values") {
  std::vector<Pole> poles{{{0, 0}, StrengthSpec::simple(1.0), "a"},
                          {{1, 0}, StrengthSpec::simple(1.0), "a"}};
  CHECK_THROWS_AS(validate_poles(poles), Error);
  poles[1].label = "b";
  CHECK_NOTHROW(validate_poles(poles));
  poles[1].position = {std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK_THROWS_AS(validate_poles(poles), Error);
  poles[1].position = {1.0, 0.0};
  poles[0].strength = StrengthSpec::simple({std::numeric_limits<double>::infinity(), 0.0});
  CHECK_THROWS_AS(validate_poles(poles), Error);
}

TEST_CASE("event kinds round-trip through their names") {
  for (auto k : {EventKind::BoundaryCrossing, EventKind::Collision, EventKind::ZenoTrap,
                 EventKind::Horizon, EventKind::Failure}) {
    CHECK(event_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS(event_kind_from_string("nope"));
}

TEST_CASE("trajectory terminal event") {
  Trajectory tr;
  tr.labels = {"a", "b"};
  tr.events.push_back({EventKind::BoundaryCrossing, 0.1, "a", {}, {}});
  tr.events.push_back({EventKind::Horizon, 1.0, {}, {}, {}});
  CHECK_FALSE(tr.terminated_early());
  CHECK(tr.terminal_event()->kind == EventKind::Horizon);
  CHECK(tr.count(EventKind::BoundaryCrossing) == 1);
  CHECK(tr.pole_index("b") == 1);
  CHECK_THROWS(tr.pole_index("z"));
  tr.events.back().kind = EventKind::Collision;
  CHECK(tr.terminated_early());
}

TEST_CASE("collision error carries the pair") {
  CollisionError e(1, 3, 1e-12);
  CHECK(e.first() == 1);
  CHECK(e.second() == 3);
  CHECK(e.separation() == 1e-12);
}
