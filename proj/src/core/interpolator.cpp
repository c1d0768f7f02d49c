#include "core/interpolator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace trackenrich {

VelocityField::VelocityField(long start_k, double grid_step, std::vector<Vec2> velocities, double alpha)
    : start_k_(start_k), step_(grid_step), alpha_(alpha), v_(std::move(velocities)) {
  if (!(grid_step > 0.0)) throw PreconditionError("velocity grid step must be positive");
  if (alpha < 0.0 || alpha > 1.0) throw PreconditionError("alpha must lie in [0, 1]");
  cumulative_.reserve(v_.size());
  Vec2 acc;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i > 0) acc += (0.5 * step_) * (v_[i - 1] + v_[i]);
    cumulative_.push_back(acc);
  }
}

Vec2 VelocityField::velocity_at(double t) const {
  if (v_.empty()) return {};
  const double pos = t / step_ - static_cast<double>(start_k_);
  if (pos <= 0.0) return v_.front();
  if (pos >= static_cast<double>(v_.size() - 1)) return v_.back();
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double f = pos - static_cast<double>(i);
  return v_[i] + f * (v_[i + 1] - v_[i]);
}

Vec2 VelocityField::integral_to(double t) const {
  if (v_.empty()) return {};
  const double t0 = static_cast<double>(start_k_) * step_;
  const double t_last = static_cast<double>(start_k_ + static_cast<long>(v_.size()) - 1) * step_;
  if (t <= t0) return (t - t0) * v_.front();
  if (t >= t_last) return cumulative_.back() + (t - t_last) * v_.back();
  const auto i = std::min(static_cast<std::size_t>(std::floor((t - t0) / step_)), v_.size() - 2);
  const double tau = t - (t0 + static_cast<double>(i) * step_);
  const Vec2 slope = (1.0 / step_) * (v_[i + 1] - v_[i]);
  return cumulative_[i] + tau * v_[i] + (0.5 * tau * tau) * slope;
}

VelocityField compute_velocity_field(const std::vector<Trajectory>& outfield, double alpha, double grid_step) {
  std::map<long, std::pair<Vec2, int>> sums;
  auto on_grid = [&](double t, long& k) {
    const double q = t / grid_step;
    k = std::lround(q);
    return std::abs(q - static_cast<double>(k)) <= 1e-6;
  };
  long k_min = 0, k_max = -1;
  bool any = false;
  for (const auto& tr : outfield) {
    const auto& pts = tr.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      long k = 0;
      if (!pts[i].observed || !on_grid(pts[i].time, k)) continue;
      if (!any) { k_min = k_max = k; any = true; }
      k_min = std::min(k_min, k);
      k_max = std::max(k_max, k);
      if (i + 1 >= pts.size() || !pts[i + 1].observed) continue;
      long k_next = 0;
      if (!on_grid(pts[i + 1].time, k_next) || k_next != k + 1) continue;
      auto& slot = sums[k];
      slot.first += pts[i + 1].pos - pts[i].pos;
      slot.second += 1;
    }
  }
  if (!any) return VelocityField(0, grid_step, {}, alpha);
  std::vector<Vec2> v(static_cast<std::size_t>(k_max - k_min + 1));
  for (const auto& [k, s] : sums) v[static_cast<std::size_t>(k - k_min)] = (1.0 / (s.second * grid_step)) * s.first;
  return VelocityField(k_min, grid_step, std::move(v), alpha);
}

Vec2 weighted_velocity(const VelocityField& field, double s, double t) {
  if (s > t + kTimeEps) throw PreconditionError("weighted velocity needs s <= t");
  if (s == t) return {};
  return field.alpha() * (field.integral_to(t) - field.integral_to(s));
}

PitchPoint gap_position(const Trajectory& traj, const VelocityField& field, double t) {
  if (traj.empty()) throw PreconditionError("empty trajectory");
  const auto& pts = traj.points();
  const auto i = traj.last_at_or_before(t);
  if (i < 0 || static_cast<std::size_t>(i) + 1 >= pts.size()) {
    if (i >= 0 && std::abs(pts[static_cast<std::size_t>(i)].time - t) <= kTimeEps) return pts[static_cast<std::size_t>(i)].pos;
    throw PreconditionError("time outside the trajectory span");
  }
  const auto& a = pts[static_cast<std::size_t>(i)];
  if (std::abs(a.time - t) <= kTimeEps) return a.pos;
  const auto& b = pts[static_cast<std::size_t>(i) + 1];
  const double frac = (t - a.time) / (b.time - a.time);
  return a.pos + weighted_velocity(field, a.time, t) + frac * (b.pos - a.pos - weighted_velocity(field, a.time, b.time));
}

PitchPoint ContinuousPath::position_at(double t) const {
  if (traj_.empty()) throw PreconditionError("empty trajectory");
  if (t < traj_.front().time - kTimeEps) return backward_forecast(model_, traj_, ball_, t).mean;
  if (t > traj_.back().time + kTimeEps) return forecast(model_, traj_, ball_, t).mean;
  if (const auto* p = traj_.point_at(t)) return p->pos;
  return clamp_to_pitch(gap_position(traj_, field_, t));
}

}  // namespace trackenrich
