#include "core/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace trackenrich {

PitchPoint clamp_to_pitch(const PitchPoint& p) {
  return {std::clamp(p.x, 0.0, kPitchLength), std::clamp(p.y, 0.0, kPitchWidth)};
}

bool on_pitch(const PitchPoint& p) {
  return p.x >= 0.0 && p.x <= kPitchLength && p.y >= 0.0 && p.y <= kPitchWidth;
}

PitchPoint scale_percent_coords(const Vec2& unit, const std::string& where) {
  auto check = [&](double v, const char* axis) {
    if (!std::isfinite(v) || v < -kPercentTolerance || v > 1.0 + kPercentTolerance) {
      std::ostringstream msg;
      msg << "coordinate " << axis << "=" << v << " outside unit range";
      if (!where.empty()) msg << " in " << where;
      throw MalformedInput(msg.str());
    }
    return std::clamp(v, 0.0, 1.0);
  };
  return {kPitchLength * check(unit.x, "x"), kPitchWidth * check(unit.y, "y")};
}

std::pair<double, double> nearest_grid_times(double t, double grid_step) {
  if (!(grid_step > 0.0)) throw PreconditionError("grid_step must be positive");
  const double k = t / grid_step;
  const double r = std::round(k);
  if (std::abs(k - r) <= kTimeEps) return {r * grid_step, r * grid_step};
  const double lo = std::floor(k);
  return {lo * grid_step, (lo + 1.0) * grid_step};
}

Team parse_team(const std::string& s) {
  if (s == "home" || s == "Home") return Team::Home;
  if (s == "away" || s == "Away") return Team::Away;
  throw MalformedInput("unknown team label '" + s + "'");
}

std::size_t ObservationFrame::count(Team team, bool goalkeeper) const {
  return static_cast<std::size_t>(std::count_if(visible.begin(), visible.end(), [&](const VisiblePlayer& v) {
    return v.tag.team == team && v.tag.is_goalkeeper == goalkeeper;
  }));
}

void check_visible_caps(const ObservationFrame& frame) {
  for (Team team : {Team::Home, Team::Away}) {
    if (frame.count(team, false) > static_cast<std::size_t>(kOutfieldPerTeam) || frame.count(team, true) > 1) {
      std::ostringstream msg;
      msg << "frame at t=" << frame.time << " has too many visible " << team_name(team) << " players";
      throw MalformedInput(msg.str());
    }
  }
}

Trajectory::Trajectory(PlayerTag tag, std::vector<TrajectoryPoint> points) : tag_(tag) {
  points_.reserve(points.size());
  for (const auto& p : points) append(p);
}

void Trajectory::append(const TrajectoryPoint& p) {
  if (!points_.empty() && !(p.time > points_.back().time)) {
    throw PreconditionError("trajectory times must be strictly increasing");
  }
  points_.push_back(p);
}

std::ptrdiff_t Trajectory::last_at_or_before(double t) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), t + kTimeEps,
                             [](double v, const TrajectoryPoint& p) { return v < p.time; });
  return static_cast<std::ptrdiff_t>(it - points_.begin()) - 1;
}

const TrajectoryPoint* Trajectory::point_at(double t) const {
  const auto i = last_at_or_before(t);
  if (i < 0) return nullptr;
  const auto& p = points_[static_cast<std::size_t>(i)];
  return std::abs(p.time - t) <= kTimeEps ? &p : nullptr;
}

double Trajectory::seconds_to_nearest_observation(double t) const {
  double best = std::numeric_limits<double>::infinity();
  const auto i = last_at_or_before(t);
  for (auto j = i; j >= 0; --j) {
    const auto& p = points_[static_cast<std::size_t>(j)];
    if (p.observed) { best = std::min(best, t - p.time); break; }
  }
  for (auto j = static_cast<std::size_t>(i + 1); j < points_.size(); ++j) {
    if (points_[j].observed) { best = std::min(best, points_[j].time - t); break; }
  }
  return std::max(best, 0.0);
}

}  // namespace trackenrich
