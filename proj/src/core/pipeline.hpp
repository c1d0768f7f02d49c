// pipeline.hpp: glue between ground truth, the forecaster and the evaluator.
#pragma once

#include <vector>

#include "core/broadcast_sim.hpp"
#include "core/evaluator.hpp"
#include "core/forecaster.hpp"
#include "core/ingest.hpp"

namespace trackenrich {

/// Outfield player paths and the ball sampled on the grid from ground truth,
/// one training track per contiguous run of presence.
TrainingSet training_set_from_halves(const std::vector<MatchHalf>& halves, double grid_step);

struct EvaluationRun {
  std::vector<DiscreteMatchRecord> records;
  std::vector<HalfReconstruction> reconstructions;
  std::vector<HalfEvaluation> halves;
  ErrorReport report;
  DegradeStats degrade;
  double reconstruct_seconds = 0.0;
  double evaluate_seconds = 0.0;
};

/// Degrade every half, reconstruct and score it. Used by the acceptance
/// suite and by `evaluate` when no enriched trajectories are supplied.
EvaluationRun run_degraded_evaluation(const std::vector<MatchHalf>& halves, const ForecastModel& model,
                                      const DegradeConfig& degrade_cfg, double alpha, const AssignerConfig& cfg = {});

}  // namespace trackenrich
