// interpolator.hpp: continuous paths through assigned trajectories.
//
// Inside a gap (t1, t2) of a trajectory the path is the straight line between
// the recorded ends plus a velocity correction that lets the player drift
// with the crowd of visible players:
//
//   x(t) = x(t1) + w(t1,t) + (t-t1)/(t2-t1) * (x(t2) - x(t1) - w(t1,t2))
//   w(s,t) = alpha * integral_s^t u(r) dr
//
// with u the piecewise-linear interpolant of the mean observed velocity.
#pragma once

#include <vector>

#include "core/forecaster.hpp"
#include "core/geometry.hpp"

namespace trackenrich {

class VelocityField {
 public:
  VelocityField() = default;
  /// velocities[i] is v_k for k = start_k + i, in metres per second.
  VelocityField(long start_k, double grid_step, std::vector<Vec2> velocities, double alpha);

  double alpha() const { return alpha_; }
  double grid_step() const { return step_; }
  long start_k() const { return start_k_; }
  const std::vector<Vec2>& velocities() const { return v_; }
  /// u(t): linear between knots, held at the end values outside them.
  Vec2 velocity_at(double t) const;
  /// integral of u from the first knot to t (exact, closed form).
  Vec2 integral_to(double t) const;

 private:
  long start_k_ = 0;
  double step_ = 1.0;
  double alpha_ = 0.5;
  std::vector<Vec2> v_;
  std::vector<Vec2> cumulative_;  // integral up to each knot
};

/// v_k = mean of (x(k+1) - x(k)) / step over the outfield trajectories holding
/// observed points at both grid times; zero where no trajectory qualifies.
VelocityField compute_velocity_field(const std::vector<Trajectory>& outfield, double alpha, double grid_step = 1.0);

/// w(s, t) = alpha * integral_s^t u(r) dr. Requires s <= t.
Vec2 weighted_velocity(const VelocityField& field, double s, double t);

/// Non-owning view of one player's continuous path. Outside the recorded
/// span the forecaster mean is used (backwards before the first point).
class ContinuousPath {
 public:
  ContinuousPath(const Trajectory& traj, const VelocityField& field, const ForecastModel& model, const GridSeries& ball)
      : traj_(traj), field_(field), model_(model), ball_(ball) {}

  const Trajectory& trajectory() const { return traj_; }
  PitchPoint position_at(double t) const;

 private:
  const Trajectory& traj_;
  const VelocityField& field_;
  const ForecastModel& model_;
  const GridSeries& ball_;
};

/// Gap formula without the extrapolation or clamping; t must be inside the span.
PitchPoint gap_position(const Trajectory& traj, const VelocityField& field, double t);

}  // namespace trackenrich
