#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shire/rng.hpp"
#include "shire/world.hpp"

using namespace shire;

namespace {

Obstacle square(double x0, double y0, double x1, double y1) {
  return Obstacle{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

}  // namespace

TEST_CASE("position_at follows segments at configured speed") {
  WaypointPath path;
  path.waypoints = {{0, 0}, {100, 0}};
  path.speed = 10;
  CHECK(path.position_at_seconds(5) == Point2D{50, 0});
  CHECK(path.position_at_seconds(0) == Point2D{0, 0});
  // clamp past the end
  CHECK(path.position_at_seconds(1000) == Point2D{100, 0});
  CHECK(path.duration_seconds() == doctest::Approx(10));
}

TEST_CASE("per-segment speed overrides") {
  WaypointPath path;
  path.waypoints = {{0, 0}, {10, 0}, {10, 10}};
  path.speed = 1;
  path.segment_speeds = {10, 1};
  CHECK(path.duration_seconds() == doctest::Approx(11));
  CHECK(path.position_at_seconds(0.5) == Point2D{5, 0});
  Point2D p = path.position_at_seconds(6);
  CHECK(p.x == doctest::Approx(10));
  CHECK(p.y == doctest::Approx(5));
}

TEST_CASE("position_at is continuous within speed bounds") {
  WaypointPath path;
  path.waypoints = {{0, 0}, {40, 30}, {40, 90}, {-10, 90}};
  path.speed = 3;
  RngStream rng(11, "continuity");
  for (int i = 0; i < 500; ++i) {
    double t = rng.uniform(0, path.duration_seconds() + 5);
    double eps = rng.uniform(0, 0.25);
    double moved = distance(path.position_at_seconds(t),
                            path.position_at_seconds(t + eps));
    CHECK(moved <= path.speed * eps + 1e-9);
  }
}

TEST_CASE("segment_blocked agrees with the stated square examples") {
  std::vector<Obstacle> obs{square(4, -1, 6, 1)};
  CHECK(segment_blocked({0, 0}, {10, 0}, obs));
  CHECK_FALSE(segment_blocked({0, 5}, {10, 5}, obs));
  CHECK_FALSE(segment_blocked({0, 0}, {10, 0}, {}));

  // cross-checked against the dense-sampling oracle
  CHECK(oracles::segment_blocked_brute({0, 0}, {10, 0}, obs[0]));
  CHECK_FALSE(oracles::segment_blocked_brute({0, 5}, {10, 5}, obs[0]));
}

TEST_CASE("segment_blocked is symmetric") {
  std::vector<Obstacle> obs{square(4, -1, 6, 1),
                            Obstacle{{{20, 0}, {30, 0}, {25, 9}}}};
  RngStream rng(5, "symmetry");
  for (int i = 0; i < 2000; ++i) {
    Point2D a{rng.uniform(-5, 35), rng.uniform(-5, 15)};
    Point2D b{rng.uniform(-5, 35), rng.uniform(-5, 15)};
    CHECK(segment_blocked(a, b, obs) == segment_blocked(b, a, obs));
  }
}

TEST_CASE("covered: distance and occlusion") {
  World w;
  w.aps.push_back({"ap1", {0, 0}, 100, "w1", 0.010});
  SUBCASE("at the AP position") {
    CHECK(w.covered({0, 0}, w.aps[0]));
  }
  SUBCASE("just beyond range") {
    CHECK_FALSE(w.covered({101, 0}, w.aps[0]));
    CHECK(w.covered({100, 0}, w.aps[0]));
  }
  SUBCASE("in range but occluded") {
    w.obstacles.push_back(square(40, -5, 60, 5));
    CHECK_FALSE(w.covered({90, 0}, w.aps[0]));
    CHECK(oracles::segment_blocked_brute({90, 0}, {0, 0}, w.obstacles[0]));
    // off the shadow line
    CHECK(w.covered({0, 90}, w.aps[0]));
  }
}

TEST_CASE("coverage is monotone in range") {
  World w;
  w.aps.push_back({"ap1", {0, 0}, 50, "w1", 0.010});
  w.obstacles.push_back(square(10, -2, 12, 2));
  RngStream rng(7, "monotone");
  for (int i = 0; i < 1000; ++i) {
    Point2D p{rng.uniform(-80, 80), rng.uniform(-80, 80)};
    AccessPoint bigger = w.aps[0];
    bigger.range += rng.uniform(0, 100);
    if (w.covered(p, w.aps[0])) CHECK(w.covered(p, bigger));
  }
}

TEST_CASE("coverage_timeline: full coverage means no empty samples") {
  World w;
  w.aps.push_back({"ap1", {50, 10}, 500, "w1", 0.010});
  w.path.waypoints = {{0, 0}, {100, 0}};
  w.path.speed = 10;
  auto timeline = coverage_timeline(w, sim_seconds(0.5), sim_seconds(10));
  CHECK(timeline.size() == 21);
  for (const CoverageSample& s : timeline) CHECK_FALSE(s.aps.empty());
}

TEST_CASE("coverage_timeline refines consistently when dt halves") {
  World w;
  w.aps.push_back({"ap1", {0, 60}, 100, "w1", 0.010});
  w.aps.push_back({"ap2", {150, 60}, 100, "w2", 0.010});
  w.obstacles.push_back(square(70, 20, 80, 30));
  w.path.waypoints = {{-50, 0}, {250, 0}};
  w.path.speed = 2;

  SimTime t_end = sim_seconds(w.path.duration_seconds());
  auto coarse = coverage_timeline(w, sim_seconds(0.1), t_end);
  auto fine = coverage_timeline(w, sim_seconds(0.05), t_end);
  // pointwise agreement at shared sample instants
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    CHECK(coarse[i].t == fine[2 * i].t);
    CHECK(coarse[i].aps == fine[2 * i].aps);
  }

  // transitions found at dt are still found at dt/2, within dt
  auto tr_coarse =
      coverage_transitions(w, sim_seconds(0.1), SimTime::from_us(1000), t_end);
  auto tr_fine =
      coverage_transitions(w, sim_seconds(0.05), SimTime::from_us(1000), t_end);
  CHECK(tr_fine.size() >= tr_coarse.size());
  for (const CoverageTransition& tc : tr_coarse) {
    bool matched = false;
    for (const CoverageTransition& tf : tr_fine) {
      if (tf.ap == tc.ap && tf.up == tc.up &&
          std::llabs((tf.t - tc.t).us()) <= 100000)
        matched = true;
    }
    CHECK(matched);
  }
}

TEST_CASE("coverage transitions bisect to the geometric boundary") {
  World w;
  w.aps.push_back({"ap1", {0, 0}, 100, "w1", 0.010});
  w.path.waypoints = {{0, 0}, {200, 0}};
  w.path.speed = 10;  // leaves range at exactly t=10
  auto tr = coverage_transitions(w, sim_seconds(0.1), SimTime::from_us(1000),
                                 sim_seconds(20));
  REQUIRE(tr.size() == 1);
  CHECK_FALSE(tr[0].up);
  CHECK(std::llabs(tr[0].t.us() - 10000000) <= 1000);
}

TEST_CASE("polygon validity helpers") {
  CHECK(polygon_is_simple(square(0, 0, 1, 1)));
  CHECK(polygon_area(square(0, 0, 2, 3)) == doctest::Approx(6));
  Polygon bowtie{{{0, 0}, {2, 2}, {2, 0}, {0, 2}}};
  CHECK_FALSE(polygon_is_simple(bowtie));
}
