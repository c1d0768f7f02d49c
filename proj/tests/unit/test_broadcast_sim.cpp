#include <doctest.h>

#include <random>

#include "core/broadcast_sim.hpp"
#include "support/synthetic.hpp"

using namespace trackenrich;

namespace {

// Native 25 fps frames from `start`, ball fixed at (60,40), players given per frame.
MatchHalf fixed_half(double start, double end, std::vector<PitchPoint> players) {
  MatchHalf h;
  h.half_id = 1;
  for (long i = 0;; ++i) {
    const double t = start + static_cast<double>(i) * 0.04;
    if (t > end + 1e-9) break;
    TruthFrame f;
    f.time = t;
    f.ball = {60, 40};
    for (std::size_t p = 0; p < players.size(); ++p) {
      f.players.push_back({static_cast<int>(p), {p % 2 ? Team::Away : Team::Home, false}, players[p]});
    }
    h.frames.push_back(std::move(f));
  }
  return h;
}

}  // namespace

TEST_CASE("visibility radius is inclusive") {
  const MatchHalf h = fixed_half(0.04, 10.0, {{84, 58}, {60, 75}});
  const DiscreteMatchRecord r = degrade(h, {1.0, 30.0, 0});
  REQUIRE(!r.frames.empty());
  for (const auto& f : r.frames) {
    REQUIRE(f.visible.size() == 1);
    CHECK(f.visible[0].pos == PitchPoint{84, 58});  // sqrt(24^2 + 18^2) = 30
  }
}

TEST_CASE("nearest native frame") {
  const MatchHalf h = fixed_half(0.0, 1.0, {});
  CHECK(ground_truth_at(h, 0.08).time == doctest::Approx(0.08));
  CHECK(ground_truth_at(h, 0.03).time == doctest::Approx(0.04));
  const double mid = ground_truth_at(h, 0.06).time;
  CHECK(std::abs(mid - 0.06) <= 0.02 + 1e-12);
  CHECK(ground_truth_at(h, 0.02).time == doctest::Approx(0.0));  // tie goes to the earlier frame
  CHECK_THROWS_AS(ground_truth_at(h, 1.5), std::out_of_range);
  CHECK_THROWS_AS(ground_truth_at(h, -0.1), std::out_of_range);
}

TEST_CASE("sampling grid and trimming") {
  const MatchHalf h = fixed_half(0.04, 100.0, {{60, 40}});
  const DiscreteMatchRecord r = degrade(h, {});
  // grid seconds 1..100, 30 dropped at each end
  REQUIRE(r.frames.size() == 40);
  CHECK(r.frames.front().time == 31.0);
  CHECK(r.frames.back().time == 70.0);
  const DiscreteMatchRecord half_hz = degrade(h, {0.5, 30.0, 0});
  CHECK(half_hz.frames.size() == 200);
  CHECK_THROWS_AS(degrade(fixed_half(0.04, 40.0, {}), DegradeConfig{}), std::runtime_error);
  CHECK_THROWS_AS(degrade(h, {0.0, 30.0, 0}), PreconditionError);
  CHECK_THROWS_AS(degrade(h, {1.0, 30.0, -1}), PreconditionError);
}

TEST_CASE("degraded frames carry no identities and respect the half's direction") {
  synth::Options o;
  o.duration_s = 120;
  const TrackingData m = synth::make_match(o);
  for (const auto& half : m.halves) {
    const DiscreteMatchRecord r = degrade(half, {1.0, 30.0, 5});
    CHECK(r.half_id == half.half_id);
    CHECK(r.home_attacks_positive_x == half.home_attacks_positive_x);
    for (const auto& f : r.frames) {
      const TruthFrame& t = ground_truth_at(half, f.time);
      CHECK(f.ball == t.ball);
      std::size_t expected = 0;
      for (const auto& p : t.players) expected += distance(p.pos, t.ball) <= 30.0;
      CHECK(f.visible.size() == expected);
    }
    const DiscreteMatchRecord full = sample_undegraded(half, {1.0, 30.0, 5});
    REQUIRE(full.frames.size() == r.frames.size());
    for (const auto& f : full.frames) CHECK(f.visible.size() == 22);
    const DegradeStats s = degrade_stats(half, r);
    CHECK(s.frames == r.frames.size());
    CHECK(s.visible_outfielders + s.hidden_outfielders == 20 * s.frames);
    CHECK(degrade_stats(half, full).hidden_outfielders == 0);
  }
}

TEST_CASE("shrinking the radius never reveals a player") {
  synth::Options o;
  o.duration_s = 90;
  o.halves = 1;
  const MatchHalf h = synth::make_match(o).halves[0];
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(5.0, 60.0);
  for (int i = 0; i < 20; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const auto small = degrade(h, {1.0, a, 0});
    const auto large = degrade(h, {1.0, b, 0});
    REQUIRE(small.frames.size() == large.frames.size());
    for (std::size_t f = 0; f < small.frames.size(); ++f) {
      for (const auto& v : small.frames[f].visible) {
        CHECK(std::find(large.frames[f].visible.begin(), large.frames[f].visible.end(), v) !=
              large.frames[f].visible.end());
      }
    }
  }
}
