#include <doctest.h>

#include <limits>
#include <random>
#include <sstream>

#include "core/geometry.hpp"
#include "core/json_out.hpp"

using namespace trackenrich;

TEST_CASE("percent coordinates scale onto the pitch") {
  CHECK(scale_percent_coords({0.5, 0.5}) == PitchPoint{60, 40});
  CHECK(scale_percent_coords({0.0, 0.5}) == PitchPoint{0, 40});
  CHECK(scale_percent_coords({1.0, 0.5}) == PitchPoint{120, 40});
  CHECK(scale_percent_coords({0.0, 0.0}) == PitchPoint{0, 0});
}

TEST_CASE("percent coordinates tolerate a small overshoot and reject the rest") {
  CHECK(scale_percent_coords({1.04, -0.03}) == PitchPoint{120, 0});
  CHECK_THROWS_AS(scale_percent_coords({1.2, 0.5}, "row 3"), MalformedInput);
  CHECK_THROWS_WITH_AS(scale_percent_coords({0.5, -0.5}, "row 7"), doctest::Contains("row 7"), MalformedInput);
  CHECK_THROWS_AS(scale_percent_coords({std::numeric_limits<double>::quiet_NaN(), 0.5}), MalformedInput);
}

TEST_CASE("percent scaling is affine") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 p{u(rng), u(rng)}, q{u(rng), u(rng)};
    const double a = u(rng);
    const PitchPoint lhs = scale_percent_coords(a * p + (1 - a) * q);
    const PitchPoint rhs = a * scale_percent_coords(p) + (1 - a) * scale_percent_coords(q);
    CHECK(distance(lhs, rhs) < 1e-9);
  }
}

TEST_CASE("grid times bracket a query") {
  CHECK(nearest_grid_times(3.0, 1.0) == std::pair{3.0, 3.0});
  CHECK(nearest_grid_times(3.4, 1.0) == std::pair{3.0, 4.0});
  CHECK(nearest_grid_times(0.5, 1.0) == std::pair{0.0, 1.0});
  CHECK(nearest_grid_times(1.25, 0.5) == std::pair{1.0, 1.5});
}

TEST_CASE("clamping and pitch membership") {
  CHECK(clamp_to_pitch({-3, 90}) == PitchPoint{0, 80});
  CHECK(on_pitch({120, 80}));
  CHECK_FALSE(on_pitch({120.5, 10}));
}

TEST_CASE("team names parse both ways") {
  CHECK(parse_team("home") == Team::Home);
  CHECK(parse_team("Away") == Team::Away);
  CHECK(std::string(team_name(Team::Away)) == "away");
  CHECK(other(Team::Home) == Team::Away);
  CHECK_THROWS_AS(parse_team("referee"), MalformedInput);
}

TEST_CASE("trajectory times must increase") {
  Trajectory t(PlayerTag{Team::Home, false});
  t.append({{1, 1}, 1.0, true});
  t.append({{2, 1}, 2.0, true});
  CHECK_THROWS(t.append({{3, 1}, 2.0, true}));
  CHECK(t.last_at_or_before(0.5) == -1);
  CHECK(t.last_at_or_before(1.5) == 0);
  CHECK(t.last_at_or_before(2.0) == 1);
  REQUIRE(t.point_at(2.0) != nullptr);
  CHECK(t.point_at(2.0)->pos == PitchPoint{2, 1});
  CHECK(t.point_at(1.5) == nullptr);
}

TEST_CASE("occlusion age ignores seeded points") {
  Trajectory t(PlayerTag{Team::Away, false});
  t.append({{1, 1}, 0.0, false});
  CHECK(t.seconds_to_nearest_observation(3.0) == std::numeric_limits<double>::infinity());
  t.append({{1, 1}, 5.0, true});
  t.append({{1, 1}, 9.0, true});
  CHECK(t.seconds_to_nearest_observation(0.0) == doctest::Approx(5.0));
  CHECK(t.seconds_to_nearest_observation(8.0) == doctest::Approx(1.0));
}

TEST_CASE("visible caps per team") {
  ObservationFrame f;
  for (int i = 0; i < 10; ++i) f.visible.push_back({{Team::Home, false}, {10.0 + i, 10}});
  f.visible.push_back({{Team::Home, true}, {2, 40}});
  CHECK_NOTHROW(check_visible_caps(f));
  CHECK(f.count(Team::Home, false) == 10);
  CHECK(f.count(Team::Home, true) == 1);
  f.visible.push_back({{Team::Home, false}, {50, 50}});
  CHECK_THROWS_AS(check_visible_caps(f), MalformedInput);
}

TEST_CASE("numbers keep at least two decimals and round-trip") {
  using json_out::format_number;
  CHECK(format_number(60.25) == "60.25");
  CHECK(format_number(40.5) == "40.50");
  CHECK(format_number(3.0) == "3.00");
  CHECK(format_number(-0.0) == "0.00");
  CHECK(format_number(0.1 + 0.2) == "0.30000000000000004");
  CHECK(format_number(1e-7) == "0.0000001");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "null");
  CHECK(format_number(7.0, 0) == "7");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-200, 200);
  for (int i = 0; i < 500; ++i) {
    const double v = u(rng);
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("json writer nests and quotes") {
  std::ostringstream os;
  json_out::Writer w(os, false);
  w.begin_object().key("a\"b").value(1.5).key("list").begin_array().value(true).null().value_int(3).end_array();
  w.key("s").value("x\ny").end_object();
  CHECK(os.str() == "{\"a\\\"b\":1.50,\"list\":[true,null,3],\"s\":\"x\\ny\"}");
}
