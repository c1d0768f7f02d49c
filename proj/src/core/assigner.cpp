#include "core/assigner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace trackenrich {

double log_likelihood(const Forecast& forecast, const PitchPoint& pos, double floor) {
  if (!(forecast.std > 0.0)) throw PreconditionError("forecast std must be positive");
  const double var = forecast.std * forecast.std;
  const double value = -std::log(2.0 * std::numbers::pi * var) - (pos - forecast.mean).squaredNorm() / (2.0 * var);
  return std::max(value, floor);
}

bool defends_low_x(Team team, bool home_attacks_positive_x) {
  return (team == Team::Home) == home_attacks_positive_x;
}

std::vector<Trajectory> initialize(const ObservationFrame& first_frame, Team team, bool home_attacks_positive_x,
                                   const AssignerConfig& cfg) {
  const PlayerTag tag{team, false};
  std::vector<Trajectory> out;
  std::vector<double> taken_y;
  const bool low = defends_low_x(team, home_attacks_positive_x);
  std::optional<double> deepest;
  for (const auto& v : first_frame.visible) {
    if (v.tag != tag) continue;
    if (static_cast<int>(out.size()) >= cfg.outfield_per_team) break;
    Trajectory t(tag);
    t.append({v.pos, first_frame.time, true});
    out.push_back(std::move(t));
    taken_y.push_back(v.pos.y);
    if (!deepest || (low ? v.pos.x < *deepest : v.pos.x > *deepest)) deepest = v.pos.x;
  }
  const int missing = cfg.outfield_per_team - static_cast<int>(out.size());
  if (missing <= 0) return out;

  const double line_x = deepest ? *deepest : (low ? cfg.fallback_line_depth : kPitchLength - cfg.fallback_line_depth);
  const int n_slots = std::max(cfg.outfield_per_team, 2);
  std::vector<double> slots;
  for (int i = 0; i < n_slots; ++i) {
    slots.push_back(cfg.line_y_min + (cfg.line_y_max - cfg.line_y_min) * i / (n_slots - 1));
  }
  auto clearance = [](double y, const std::vector<double>& others) {
    double best = std::numeric_limits<double>::infinity();
    for (double o : others) best = std::min(best, std::abs(y - o));
    return best;
  };
  std::vector<char> used(slots.size(), 0);
  std::vector<char> free_slot(slots.size(), 0);
  for (std::size_t s = 0; s < slots.size(); ++s) free_slot[s] = clearance(slots[s], taken_y) > cfg.slot_exclusion;

  // Greedy max-min clearance over free slots first, then any remaining slot.
  std::vector<double> seeds;
  std::vector<double> occupied = taken_y;
  for (int k = 0; k < missing; ++k) {
    std::optional<std::size_t> pick;
    for (int pass = 0; pass < 2 && !pick; ++pass) {
      double best = -1.0;
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if (used[s] || (pass == 0 && !free_slot[s])) continue;
        const double c = clearance(slots[s], occupied);
        if (c > best) { best = c; pick = s; }
      }
    }
    double y = 0.0;
    if (pick) {
      used[*pick] = 1;
      y = slots[*pick];
    } else {
      y = (cfg.line_y_min + cfg.line_y_max) / 2;  // more seeds than slots
    }
    seeds.push_back(y);
    occupied.push_back(y);
  }
  std::sort(seeds.begin(), seeds.end());
  for (double y : seeds) {
    Trajectory t(tag);
    t.append({clamp_to_pitch({line_x, y}), first_frame.time, false});
    out.push_back(std::move(t));
  }
  return out;
}

GridSeries ball_grid(const DiscreteMatchRecord& record, double grid_step) {
  if (record.frames.empty()) throw PreconditionError("record has no frames");
  Trajectory ball;
  for (const auto& f : record.frames) ball.append({f.ball, f.time, true});
  return resample_to_grid(ball, grid_step);
}

std::vector<Trajectory> TrajectorySet::all() const {
  std::vector<Trajectory> out;
  for (const auto* t : {&home, &away}) {
    out.insert(out.end(), t->outfield.begin(), t->outfield.end());
    out.push_back(t->goalkeeper);
  }
  return out;
}

std::vector<Trajectory> TrajectorySet::all_outfield() const {
  std::vector<Trajectory> out = home.outfield;
  out.insert(out.end(), away.outfield.begin(), away.outfield.end());
  return out;
}

CostMatrix assignment_costs(const ForecastModel& model, const std::vector<Trajectory>& trajectories,
                            const GridSeries& ball, double t, const std::vector<PitchPoint>& visible,
                            double log_density_floor) {
  CostMatrix cost(trajectories.size(), visible.size());
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Forecast fc = forecast(model, trajectories[i], ball, t);
    for (std::size_t j = 0; j < visible.size(); ++j) cost(i, j) = -log_likelihood(fc, visible[j], log_density_floor);
  }
  return cost;
}

namespace {

Trajectory seed_keeper(const ObservationFrame& first, Team team, bool home_attacks_positive_x) {
  const PlayerTag tag{team, true};
  Trajectory keeper(tag);
  for (const auto& v : first.visible) {
    if (v.tag == tag) {
      keeper.append({v.pos, first.time, true});
      return keeper;
    }
  }
  const double x = defends_low_x(team, home_attacks_positive_x) ? 5.0 : kPitchLength - 5.0;
  keeper.append({{x, kPitchWidth / 2}, first.time, false});
  return keeper;
}

}  // namespace

TrajectorySet build_trajectories(const DiscreteMatchRecord& record, const ForecastModel& model,
                                 const AssignerConfig& cfg) {
  if (record.frames.empty()) throw PreconditionError("cannot build trajectories from an empty record");
  TrajectorySet set;
  set.half_id = record.half_id;
  set.home_attacks_positive_x = record.home_attacks_positive_x;
  set.ball = ball_grid(record, model.grid_step);

  const ObservationFrame& first = record.frames.front();
  for (Team team : {Team::Home, Team::Away}) {
    auto& tt = set.team(team);
    tt.outfield = initialize(first, team, record.home_attacks_positive_x, cfg);
    tt.goalkeeper = seed_keeper(first, team, record.home_attacks_positive_x);
  }

  std::vector<PitchPoint> visible;
  for (std::size_t f = 1; f < record.frames.size(); ++f) {
    const ObservationFrame& frame = record.frames[f];
    for (Team team : {Team::Home, Team::Away}) {
      auto& tt = set.team(team);
      visible.clear();
      for (const auto& v : frame.visible) {
        if (v.tag.team != team) continue;
        if (v.tag.is_goalkeeper) {
          tt.goalkeeper.append({v.pos, frame.time, true});
        } else {
          visible.push_back(v.pos);
        }
      }
      if (visible.empty()) continue;
      if (visible.size() > tt.outfield.size()) {
        std::ostringstream msg;
        msg << "frame at t=" << frame.time << " shows " << visible.size() << " " << team_name(team)
            << " outfielders but only " << tt.outfield.size() << " trajectories exist";
        throw MalformedInput(msg.str());
      }
      const CostMatrix cost = assignment_costs(model, tt.outfield, set.ball, frame.time, visible, cfg.log_density_floor);
      const Assignment a = solve_assignment(cost);
      for (std::size_t j = 0; j < visible.size(); ++j) tt.outfield[a.row_of[j]].append({visible[j], frame.time, true});
    }
  }
  return set;
}

TrajectorySet trajectory_set_from(std::vector<Trajectory> trajectories, int half_id, bool home_attacks_positive_x,
                                  GridSeries ball) {
  TrajectorySet set;
  set.half_id = half_id;
  set.home_attacks_positive_x = home_attacks_positive_x;
  set.ball = std::move(ball);
  for (auto& t : trajectories) {
    auto& tt = set.team(t.tag().team);
    if (t.tag().is_goalkeeper) {
      tt.goalkeeper = std::move(t);
    } else {
      tt.outfield.push_back(std::move(t));
    }
  }
  return set;
}

}  // namespace trackenrich
