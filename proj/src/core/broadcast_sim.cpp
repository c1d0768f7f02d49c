#include "core/broadcast_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace trackenrich {

void DegradeConfig::validate() const {
  if (!(sample_period > 0.0)) throw PreconditionError("sample period must be positive");
  if (!(visibility_radius > 0.0)) throw PreconditionError("visibility radius must be positive");
  if (trim_frames < 0) throw PreconditionError("trim frame count must be non-negative");
}

const TruthFrame& ground_truth_at(const MatchHalf& half, double t) {
  const auto& frames = half.frames;
  if (frames.empty() || t < frames.front().time - kTimeEps || t > frames.back().time + kTimeEps) {
    std::ostringstream msg;
    msg << "time " << t << " outside half " << half.half_id;
    throw std::out_of_range(msg.str());
  }
  auto it = std::lower_bound(frames.begin(), frames.end(), t,
                             [](const TruthFrame& f, double v) { return f.time < v; });
  if (it == frames.end()) return frames.back();
  if (it == frames.begin()) return *it;
  auto prev = std::prev(it);
  return (it->time - t) < (t - prev->time) ? *it : *prev;
}

namespace {

DiscreteMatchRecord sample(const MatchHalf& half, const DegradeConfig& cfg, bool all_visible) {
  cfg.validate();
  if (half.frames.empty()) throw PreconditionError("half has no frames");
  const double first = half.frames.front().time;
  const double last = half.frames.back().time;
  if (last - first < 2.0 * cfg.trim_frames * cfg.sample_period) {
    throw std::runtime_error("half too short");
  }
  const auto k0 = static_cast<long>(std::ceil(first / cfg.sample_period - kTimeEps));
  const auto k1 = static_cast<long>(std::floor(last / cfg.sample_period + kTimeEps));

  DiscreteMatchRecord record;
  record.half_id = half.half_id;
  record.source = RecordSource::Simulated;
  record.home_attacks_positive_x = half.home_attacks_positive_x;
  for (long k = k0 + cfg.trim_frames; k <= k1 - cfg.trim_frames; ++k) {
    const double t = static_cast<double>(k) * cfg.sample_period;
    const TruthFrame& truth = ground_truth_at(half, t);
    ObservationFrame frame;
    frame.time = t;
    frame.ball = truth.ball;
    for (const auto& p : truth.players) {
      if (all_visible || distance(p.pos, truth.ball) <= cfg.visibility_radius) frame.visible.push_back({p.tag, p.pos});
    }
    record.frames.push_back(std::move(frame));
  }
  return record;
}

}  // namespace

DiscreteMatchRecord degrade(const MatchHalf& half, const DegradeConfig& cfg) { return sample(half, cfg, false); }

DiscreteMatchRecord sample_undegraded(const MatchHalf& half, const DegradeConfig& cfg) {
  return sample(half, cfg, true);
}

DegradeStats degrade_stats(const MatchHalf& half, const DiscreteMatchRecord& record) {
  DegradeStats stats;
  for (const auto& f : record.frames) {
    const TruthFrame& truth = ground_truth_at(half, f.time);
    const auto on_pitch_outfield = static_cast<std::size_t>(
        std::count_if(truth.players.begin(), truth.players.end(), [](const TruthPlayer& p) { return !p.tag.is_goalkeeper; }));
    const std::size_t visible = f.count(Team::Home, false) + f.count(Team::Away, false);
    ++stats.frames;
    stats.visible_outfielders += visible;
    stats.hidden_outfielders += on_pitch_outfield - std::min(visible, on_pitch_outfield);
  }
  return stats;
}

}  // namespace trackenrich
