// assigner.hpp: builds per-team player trajectories from identity-free frames
// by maximum-likelihood assignment of visible positions to forecasts.
#pragma once

#include <vector>

#include "core/assignment.hpp"
#include "core/forecaster.hpp"
#include "core/ingest.hpp"

namespace trackenrich {

struct AssignerConfig {
  // Floor on the log-density so every cost entry stays finite.
  double log_density_floor = -50.0;
  int outfield_per_team = kOutfieldPerTeam;
  double fallback_line_depth = 25.0;
  double line_y_min = 10.0;
  double line_y_max = 70.0;
  double slot_exclusion = 5.0;
};

/// log of the isotropic bivariate normal density at pos, floored.
double log_likelihood(const Forecast& forecast, const PitchPoint& pos, double floor = -50.0);

/// Whether `team` defends the x = 0 goal line in this half.
bool defends_low_x(Team team, bool home_attacks_positive_x);

/// Seeds one trajectory per outfielder: visible players at their observed
/// points, the rest on the defensive line (unobserved seed points).
std::vector<Trajectory> initialize(const ObservationFrame& first_frame, Team team, bool home_attacks_positive_x,
                                   const AssignerConfig& cfg = {});

/// Ball positions of the record's frames resampled to the model grid.
GridSeries ball_grid(const DiscreteMatchRecord& record, double grid_step);

struct TeamTrajectories {
  std::vector<Trajectory> outfield;
  Trajectory goalkeeper;
};

struct TrajectorySet {
  int half_id = 1;
  bool home_attacks_positive_x = true;
  GridSeries ball;
  TeamTrajectories home;
  TeamTrajectories away;

  const TeamTrajectories& team(Team t) const { return t == Team::Home ? home : away; }
  TeamTrajectories& team(Team t) { return t == Team::Home ? home : away; }
  /// Outfield then keeper trajectories of both teams, home first.
  std::vector<Trajectory> all() const;
  std::vector<Trajectory> all_outfield() const;
};

/// Cost matrix -Q for one frame: rows are trajectories, columns the visible
/// outfield positions of the team.
CostMatrix assignment_costs(const ForecastModel& model, const std::vector<Trajectory>& trajectories,
                            const GridSeries& ball, double t, const std::vector<PitchPoint>& visible,
                            double log_density_floor);

/// Sequential frame loop over the record: forecast each trajectory at the
/// frame time, solve the assignment, append the observed positions.
TrajectorySet build_trajectories(const DiscreteMatchRecord& record, const ForecastModel& model,
                                 const AssignerConfig& cfg = {});

/// Rebuilds a TrajectorySet from persisted trajectories (see write_trajectories).
TrajectorySet trajectory_set_from(std::vector<Trajectory> trajectories, int half_id, bool home_attacks_positive_x,
                                  GridSeries ball);

}  // namespace trackenrich
