#include <doctest.h>

#include <cmath>

#include "core/pipeline.hpp"
#include "support/synthetic.hpp"

using namespace trackenrich;

TEST_CASE("training tracks follow outfield presence on the grid") {
  synth::Options o;
  o.duration_s = 120;
  const TrackingData m = synth::make_match(o);
  const TrainingSet ts = training_set_from_halves(m.halves, 1.0);
  REQUIRE(ts.balls.size() == 2);
  CHECK(ts.balls[0].start_k == 1);
  CHECK(ts.balls[0].values.size() == 120);
  REQUIRE(ts.tracks.size() == 40);
  for (const auto& t : ts.tracks) {
    CHECK(t.positions.values.size() == 120);
    CHECK(t.positions.step == 1.0);
  }
  CHECK(ts.tracks.back().ball == 1);
  // grid value equals the native frame nearest the grid time
  const TruthFrame& f = ground_truth_at(m.halves[0], 5.0);
  CHECK(ts.balls[0].at(5.0) == f.ball);
}

TEST_CASE("a player leaving the pitch splits the track") {
  synth::Options o;
  o.duration_s = 60;
  o.halves = 1;
  TrackingData m = synth::make_match(o);
  auto& frames = m.halves[0].frames;
  for (auto& f : frames) {
    if (f.time > 20.0 && f.time < 30.0) std::erase_if(f.players, [](const TruthPlayer& p) { return p.id == 5; });
  }
  const TrainingSet ts = training_set_from_halves(m.halves, 1.0);
  CHECK(ts.tracks.size() == 21);
}

TEST_CASE("degraded evaluation end to end on a synthetic match") {
  synth::Options o;
  o.duration_s = 300;
  const TrackingData m = synth::make_match(o);
  const ForecastModel model = fit(training_set_from_halves(m.halves, 1.0));
  DegradeConfig dc;
  dc.trim_frames = 10;
  dc.visibility_radius = 25.0;
  const EvaluationRun run = run_degraded_evaluation(m.halves, model, dc, 0.5);
  REQUIRE(run.halves.size() == 2);
  REQUIRE(run.records.size() == 2);
  std::size_t sampled = 0, skipped = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    sampled += run.records[i].frames.size();
    skipped += run.halves[i].skipped_frames;
  }
  CHECK(skipped == 0);
  CHECK(run.report.pooled.frames == sampled);
  CHECK(run.degrade.frames == sampled);
  CHECK(run.report.pooled.predictions == run.degrade.hidden_outfielders);
  CHECK(run.report.pooled.mean_all_in_phase < run.report.pooled.mean_offcam_in_phase);
  CHECK(run.report.pooled.mean_offcam_in_phase < 10.0);
  CHECK(std::isfinite(run.report.pooled.mean_all_out_of_phase));
  CHECK(run.report.per_half.size() == 2);
  CHECK_FALSE(run.report.pooled.curve.empty());
  CHECK(run.report.pooled.curve.front().bucket_s == 0);
}
