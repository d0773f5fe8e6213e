#include <doctest.h>

#include <random>

#include "hrcplan/error.hpp"
#include "hrcplan/model.hpp"

using namespace hrcplan;

namespace {

const Box kUnit{{0, 0, 0}, {1, 1, 1}};

// Dense oracle: walk the segment in steps of at most 1e-4 m.
bool sampled_hit(const Point3& a, const Point3& b, const Box& box) {
  const double len = distance(a, b);
  const auto steps = static_cast<std::size_t>(len / 1e-4) + 1;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps);
    if (box_contains(box, a + t * (b - a))) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("region membership") {
  CHECK_FALSE(region_contains(Region{}, {0.5, 0.5, 0.5}));
  const Region r{{kUnit}};
  CHECK(region_contains(r, {0.5, 0.5, 0.5}));
  CHECK(region_contains(r, {1, 1, 1}));
  CHECK(region_contains(r, {0, 0, 0}));
  CHECK_FALSE(region_contains(r, {1.0000001, 0.5, 0.5}));
}

TEST_CASE("segment crossing a box") {
  const Region r{{kUnit}};
  const Trajectory through({{-1, 0.5, 0.5}, {2, 0.5, 0.5}});
  CHECK(trajectory_intersects(through, r));
  const Trajectory outside({{-1, 2, 0}, {2, 2, 0}});
  CHECK_FALSE(trajectory_intersects(outside, r));
  CHECK_FALSE(trajectory_intersects(through, Region{}));
}

TEST_CASE("grazing segments agree with dense sampling") {
  struct Case {
    Point3 a, b;
  };
  const Case cases[] = {
      {{-1, 0.5, 0.5}, {0, 0.5, 0.5}},  // endpoint on a face
      {{-1, 1, 0.5}, {2, 1, 0.5}},      // runs along a face
      {{-1, 1, 1}, {2, 1, 1}},          // runs along an edge
      {{-1, 2, 0.5}, {2, -1, 0.5}},     // diagonal through
      {{1, 1.5, 0.5}, {2, 1, 0.5}},     // ends off the corner
      {{-0.5, 1.5, 0.5}, {1.5, -0.5, 0.5}},
      {{1.00005, -1, 0.5}, {1.00005, 2, 0.5}},  // parallel just outside
  };
  for (const auto& c : cases) {
    CAPTURE(c.a.x);
    CAPTURE(c.a.y);
    CHECK(segment_intersects_box(c.a, c.b, kUnit) == sampled_hit(c.a, c.b, kUnit));
  }
}

TEST_CASE("random segments agree with dense sampling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  int hits = 0;
  for (int i = 0; i < 300; ++i) {
    const Point3 a{u(rng), u(rng), u(rng)};
    const Point3 b{u(rng), u(rng), u(rng)};
    const bool exact = segment_intersects_box(a, b, kUnit);
    // The sampler can miss a corner clip narrower than its step; only disagreements of
    // that kind are tolerated.
    if (exact != sampled_hit(a, b, kUnit)) CHECK(exact);
    hits += exact;
  }
  CHECK(hits > 50);
}

TEST_CASE("union monotonicity and waypoint membership") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    Region r;
    Point3 lo{u(rng), u(rng), u(rng)};
    r.boxes.push_back({lo, lo + Point3{1, 1, 1}});
    const Point3 p{u(rng), u(rng), u(rng)};
    const bool before = region_contains(r, p);
    Point3 lo2{u(rng), u(rng), u(rng)};
    r.boxes.push_back({lo2, lo2 + Point3{0.5, 0.5, 0.5}});
    if (before) CHECK(region_contains(r, p));

    const Trajectory t({p, p + Point3{0.3, 0.1, 0}});
    if (region_contains(r, p)) CHECK(trajectory_intersects(t, r));
  }
}

TEST_CASE("trajectory invariants") {
  CHECK_THROWS_AS(Trajectory({{0, 0, 0}}), Error);
  CHECK_THROWS_AS(Trajectory({{0, 0, 0}, {0, 0, 0}}), Error);
  const Trajectory t({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}});
  CHECK(t.reversed().waypoints().front() == Point3{1, 1, 0});
  CHECK_THROWS_AS(validate(Box{{1, 0, 0}, {0, 1, 1}}), Error);
}

TEST_CASE("kind names") {
  CHECK(to_string(ActionKind::Cooperate) == "COOPERATE");
  CHECK(parse_action_kind("place") == ActionKind::Place);
  CHECK_FALSE(parse_action_kind("lift").has_value());
  CHECK(parse_agent_kind("robot") == AgentKind::Robot);
}

TEST_CASE("ground action validation") {
  GroundAction a{ActionKind::Cooperate, {"worker"}, "base_1", "workspace", 15.0};
  CHECK_THROWS_AS(a.validate(), Error);
  a.agents.push_back("robot2");
  CHECK_NOTHROW(a.validate());
  GroundAction pick{ActionKind::Pick, {"a", "b"}, "p", "l", 2.0};
  CHECK_THROWS_AS(pick.validate(), Error);
}
