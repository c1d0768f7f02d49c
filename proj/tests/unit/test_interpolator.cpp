#include <doctest.h>

#include "core/interpolator.hpp"
#include "support/properties.hpp"

using namespace trackenrich;

namespace {

Trajectory observed(PlayerTag tag, std::initializer_list<std::pair<double, PitchPoint>> pts) {
  Trajectory t(tag);
  for (const auto& [time, pos] : pts) t.append({pos, time, true});
  return t;
}

}  // namespace

TEST_CASE("velocity field averages observed steps") {
  const PlayerTag h{Team::Home, false}, a{Team::Away, false};
  const std::vector<Trajectory> trajs{
      observed(h, {{0.0, {0, 0}}, {1.0, {1, 0}}, {3.0, {5, 5}}}),
      observed(a, {{0.0, {10, 10}}, {1.0, {13, 12}}, {2.0, {13, 12}}}),
  };
  const VelocityField f = compute_velocity_field(trajs, 0.5);
  REQUIRE(f.velocities().size() >= 3);
  CHECK(f.start_k() == 0);
  CHECK(f.velocities()[0] == Vec2{2, 1});  // (1,0) and (3,2)
  CHECK(f.velocities()[1] == Vec2{0, 0});  // only the away player: stands still
  CHECK(f.velocities()[2] == Vec2{0, 0});  // nobody has both ends
  CHECK(f.alpha() == 0.5);
}

TEST_CASE("seeded points do not feed the velocity field") {
  Trajectory t(PlayerTag{Team::Home, false});
  t.append({{25, 10}, 0.0, false});
  t.append({{30, 10}, 1.0, true});
  t.append({{31, 12}, 2.0, true});
  const VelocityField f = compute_velocity_field({t}, 1.0);
  CHECK(f.start_k() == 1);
  CHECK(f.velocity_at(1.0) == Vec2{1, 2});
  CHECK(f.velocity_at(0.0) == Vec2{1, 2});
}

TEST_CASE("weighted velocity integrals") {
  const VelocityField constant(0, 1.0, {{2, 0}, {2, 0}, {2, 0}, {2, 0}, {2, 0}}, 0.5);
  CHECK(weighted_velocity(constant, 0, 4) == Vec2{4, 0});
  CHECK(weighted_velocity(constant, 2.5, 2.5) == Vec2{0, 0});
  const VelocityField ramp(0, 1.0, {{0, 0}, {2, 0}, {4, 0}}, 0.5);
  CHECK(weighted_velocity(ramp, 0, 2) == Vec2{2, 0});
  // held constant past the last knot
  CHECK(weighted_velocity(ramp, 2, 3) == Vec2{2, 0});
  CHECK(weighted_velocity(ramp, -1, 0) == Vec2{0, 0});
  CHECK_THROWS_AS(weighted_velocity(ramp, 2, 1), PreconditionError);
  CHECK_THROWS_AS(VelocityField(0, 1.0, {{0, 0}}, 1.5), PreconditionError);
}

TEST_CASE("gap formula by hand") {
  const Trajectory t = observed({Team::Home, false}, {{0.0, {0, 0}}, {10.0, {10, 0}}});
  const VelocityField zero(0, 1.0, std::vector<Vec2>(11, Vec2{0, 0}), 0.5);
  CHECK(gap_position(t, zero, 5.0) == PitchPoint{5, 0});
  // u = 1.2 on [0,5], 0.4 after, alpha 1: w(0,5) = 6 * 0.5 ... built so that w(0,5) = 3, w(0,10) = 4
  std::vector<Vec2> v(11, Vec2{0.2, 0});
  for (int k = 0; k <= 5; ++k) v[static_cast<std::size_t>(k)] = {0.6, 0};
  const VelocityField field(0, 1.0, v, 1.0);
  // integral 0..5 of 0.6 = 3; 5..6 trapezoid 0.4; 6..10 = 0.8 => 4.2 total
  CHECK(weighted_velocity(field, 0, 5).x == doctest::Approx(3.0));
  const Vec2 w10 = weighted_velocity(field, 0, 10);
  CHECK(w10.x == doctest::Approx(4.2));
  CHECK(gap_position(t, field, 5.0).x == doctest::Approx(0 + 3 + 0.5 * (10 - 4.2)));
  CHECK(gap_position(t, field, 0.0) == PitchPoint{0, 0});
  CHECK(gap_position(t, field, 10.0) == PitchPoint{10, 0});
  CHECK_THROWS_AS(gap_position(t, field, 11.0), PreconditionError);
}

TEST_CASE("worked example: w(0,5) = (3,0), w(0,10) = (4,0) gives (6,0)") {
  const PitchPoint x1{0, 0}, x2{10, 0};
  CHECK(x1 + Vec2{3, 0} + 0.5 * (x2 - x1 - Vec2{4, 0}) == PitchPoint{6, 0});
  // u = 0.6 up to t = 5, then c with (0.6 + c) / 2 + 4c = 1
  const double c = 0.7 / 4.5;
  std::vector<Vec2> v(11, Vec2{c, 0});
  for (std::size_t k = 0; k <= 5; ++k) v[k] = {0.6, 0};
  const VelocityField field(0, 1.0, v, 1.0);
  CHECK(weighted_velocity(field, 0, 5).x == doctest::Approx(3.0));
  CHECK(weighted_velocity(field, 0, 10).x == doctest::Approx(4.0));
  const Trajectory t = observed({Team::Home, false}, {{0.0, x1}, {10.0, x2}});
  CHECK(distance(gap_position(t, field, 5.0), {6, 0}) < 1e-12);
}

TEST_CASE("continuous path: exact at knots, forecast outside, clamped") {
  const Trajectory t = observed({Team::Home, false}, {{2.0, {1, 1}}, {4.0, {3, 1}}});
  const VelocityField field(0, 1.0, {{-5, 0}, {-5, 0}, {-5, 0}, {-5, 0}, {-5, 0}}, 1.0);
  const ForecastModel m = ForecastModel::random_walk(1, 1);
  const GridSeries ball{0, 1.0, {{60, 40}}};
  const ContinuousPath p(t, field, m, ball);
  CHECK(p.position_at(2.0) == PitchPoint{1, 1});
  CHECK(p.position_at(4.0) == PitchPoint{3, 1});
  CHECK(p.position_at(3.0).x >= 0.0);  // raw formula goes negative
  CHECK(p.position_at(0.0) == PitchPoint{1, 1});
  CHECK(p.position_at(9.0) == PitchPoint{3, 1});
}

TEST_CASE("translation equivariance inside gaps") {
  const Trajectory t = observed({Team::Home, false}, {{0.0, {20, 20}}, {6.0, {30, 25}}});
  const Trajectory s = observed({Team::Home, false}, {{0.0, {25, 27}}, {6.0, {35, 32}}});
  const VelocityField field(0, 1.0, {{1, 0}, {2, 1}, {0, 3}, {-1, 0}, {1, 1}, {0, 0}, {2, 2}}, 0.5);
  for (double q : {0.5, 2.0, 3.3, 5.9}) CHECK(distance(gap_position(s, field, q) - gap_position(t, field, q), {5, 7}) < 1e-12);
}

TEST_CASE("property suites for interpolation") {
  for (const auto& r : {props::interpolation_hits_recorded_points(5, 300), props::gap_decomposes_into_linear_plus_correction(6, 300),
                        props::alpha_zero_is_linear(7, 300)}) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.ok);
  }
}
