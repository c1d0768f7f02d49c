#include "core/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <map>

namespace trackenrich {

TrainingSet training_set_from_halves(const std::vector<MatchHalf>& halves, double grid_step) {
  TrainingSet set;
  for (const auto& half : halves) {
    if (half.frames.empty()) continue;
    const auto k0 = static_cast<long>(std::ceil(half.frames.front().time / grid_step - kTimeEps));
    const auto k1 = static_cast<long>(std::floor(half.frames.back().time / grid_step + kTimeEps));
    if (k1 <= k0) continue;
    const std::size_t ball_index = set.balls.size();
    GridSeries ball;
    ball.start_k = k0;
    ball.step = grid_step;

    std::map<int, TrainingSet::Track> open;  // player id -> current run
    auto close = [&](std::map<int, TrainingSet::Track>::iterator it) {
      if (it->second.positions.values.size() > 1) set.tracks.push_back(std::move(it->second));
      return open.erase(it);
    };
    for (long k = k0; k <= k1; ++k) {
      const TruthFrame& f = ground_truth_at(half, static_cast<double>(k) * grid_step);
      ball.values.push_back(f.ball);
      std::map<int, PitchPoint> present;
      for (const auto& p : f.players) {
        if (!p.tag.is_goalkeeper) present.emplace(p.id, p.pos);
      }
      for (auto it = open.begin(); it != open.end();) {
        it = present.count(it->first) ? std::next(it) : close(it);
      }
      for (const auto& [id, pos] : present) {
        auto [it, fresh] = open.try_emplace(id);
        if (fresh) {
          it->second.ball = ball_index;
          it->second.positions.start_k = k;
          it->second.positions.step = grid_step;
        }
        it->second.positions.values.push_back(pos);
      }
    }
    for (auto it = open.begin(); it != open.end();) it = close(it);
    set.balls.push_back(std::move(ball));
  }
  return set;
}

EvaluationRun run_degraded_evaluation(const std::vector<MatchHalf>& halves, const ForecastModel& model,
                                      const DegradeConfig& degrade_cfg, double alpha, const AssignerConfig& cfg) {
  using clock = std::chrono::steady_clock;
  EvaluationRun run;
  for (const auto& half : halves) {
    run.records.push_back(degrade(half, degrade_cfg));
    const DegradeStats s = degrade_stats(half, run.records.back());
    run.degrade.frames += s.frames;
    run.degrade.visible_outfielders += s.visible_outfielders;
    run.degrade.hidden_outfielders += s.hidden_outfielders;
  }
  auto t0 = clock::now();
  for (const auto& rec : run.records) run.reconstructions.push_back(reconstruct(rec, model, alpha, cfg));
  auto t1 = clock::now();
  for (std::size_t i = 0; i < halves.size(); ++i) {
    run.halves.push_back(evaluate_half(run.records[i], run.reconstructions[i], model, halves[i]));
  }
  auto t2 = clock::now();
  run.report = build_report(run.halves);
  run.reconstruct_seconds = std::chrono::duration<double>(t1 - t0).count();
  run.evaluate_seconds = std::chrono::duration<double>(t2 - t1).count();
  return run;
}

}  // namespace trackenrich
