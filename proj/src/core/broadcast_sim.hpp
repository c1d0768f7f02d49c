// broadcast_sim.hpp: degrade full tracking into broadcast-like discrete frames.
#pragma once

#include "core/ingest.hpp"

namespace trackenrich {

struct DegradeConfig {
  double sample_period = 1.0;
  double visibility_radius = 30.0;
  int trim_frames = 30;

  void validate() const;
};

/// Native frame nearest to t (ties go to the earlier frame). Throws
/// std::out_of_range when t lies outside the half.
const TruthFrame& ground_truth_at(const MatchHalf& half, double t);

/// Samples the half every `sample_period` seconds on the half-relative grid,
/// drops `trim_frames` samples at each end and keeps only the players within
/// `visibility_radius` (inclusive) of the ball. Identities are erased.
DiscreteMatchRecord degrade(const MatchHalf& half, const DegradeConfig& cfg);

/// Same sampling as degrade() but with every on-pitch player visible.
DiscreteMatchRecord sample_undegraded(const MatchHalf& half, const DegradeConfig& cfg);

struct DegradeStats {
  std::size_t frames = 0;
  std::size_t visible_outfielders = 0;
  std::size_t hidden_outfielders = 0;
  double mean_visible_outfielders() const {
    return frames ? static_cast<double>(visible_outfielders) / static_cast<double>(frames) : 0.0;
  }
};

/// Counts visible vs hidden outfielders of a degraded record against the
/// ground truth it was built from.
DegradeStats degrade_stats(const MatchHalf& half, const DiscreteMatchRecord& record);

}  // namespace trackenrich
