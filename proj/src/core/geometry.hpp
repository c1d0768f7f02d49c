// geometry.hpp: pitch coordinates, time grid and the frame/trajectory value
// types shared by every stage of the reconstruction pipeline.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trackenrich {

inline constexpr double kPitchLength = 120.0;
inline constexpr double kPitchWidth = 80.0;
inline constexpr double kPercentTolerance = 0.05;
inline constexpr int kOutfieldPerTeam = 10;
inline constexpr double kTimeEps = 1e-9;

/// Input that violates a documented file or value contract.
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator*(const Vec2& v, double s) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;

  double norm() const { return std::hypot(x, y); }
  double squaredNorm() const { return x * x + y * y; }
};

// Positions on the 120 x 80 pitch share the vector type; displacements and
// velocities are plain Vec2 as well.
using PitchPoint = Vec2;

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

PitchPoint clamp_to_pitch(const PitchPoint& p);
bool on_pitch(const PitchPoint& p);

/// Maps unit-square coordinates onto the pitch. Components may overshoot
/// [0,1] by kPercentTolerance and are clamped; anything further is rejected
/// with a MalformedInput naming `where`.
PitchPoint scale_percent_coords(const Vec2& unit, const std::string& where = "");

/// Grid times bracketing t. Both values are equal when t sits on the grid.
std::pair<double, double> nearest_grid_times(double t, double grid_step);

enum class Team { Home = 0, Away = 1 };

inline Team other(Team t) { return t == Team::Home ? Team::Away : Team::Home; }
inline const char* team_name(Team t) { return t == Team::Home ? "home" : "away"; }
Team parse_team(const std::string& s);

struct PlayerTag {
  Team team = Team::Home;
  bool is_goalkeeper = false;
  friend bool operator==(const PlayerTag&, const PlayerTag&) = default;
};

struct VisiblePlayer {
  PlayerTag tag;
  PitchPoint pos;
  friend bool operator==(const VisiblePlayer&, const VisiblePlayer&) = default;
};

/// One sampled instant: ball plus the identity-free visible players.
struct ObservationFrame {
  double time = 0.0;
  PitchPoint ball;
  std::vector<VisiblePlayer> visible;

  std::size_t count(Team team, bool goalkeeper) const;
  friend bool operator==(const ObservationFrame&, const ObservationFrame&) = default;
};

/// Throws MalformedInput when a frame carries more players than a team can field.
void check_visible_caps(const ObservationFrame& frame);

struct TrajectoryPoint {
  PitchPoint pos;
  double time = 0.0;
  // Seeded points (kick-off initialisation) are anchors but were never seen.
  bool observed = true;
  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(PlayerTag tag) : tag_(tag) {}
  Trajectory(PlayerTag tag, std::vector<TrajectoryPoint> points);

  const PlayerTag& tag() const { return tag_; }
  const std::vector<TrajectoryPoint>& points() const { return points_; }
  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  const TrajectoryPoint& front() const { return points_.front(); }
  const TrajectoryPoint& back() const { return points_.back(); }

  /// Appends a point; time must exceed the last recorded time.
  void append(const TrajectoryPoint& p);

  /// Index of the last point with time <= t, or -1.
  std::ptrdiff_t last_at_or_before(double t) const;
  /// Pointer to the point recorded exactly at t, if any.
  const TrajectoryPoint* point_at(double t) const;
  /// Seconds from t to the closest observed point, +inf when none.
  double seconds_to_nearest_observation(double t) const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  PlayerTag tag_;
  std::vector<TrajectoryPoint> points_;
};

enum class Provenance { Observed, Estimated };

struct EnrichedPlayer {
  PlayerTag tag;
  PitchPoint pos;
  Provenance provenance = Provenance::Estimated;
  friend bool operator==(const EnrichedPlayer&, const EnrichedPlayer&) = default;
};

struct EnrichedFrame {
  double time = 0.0;
  PitchPoint ball;
  std::vector<EnrichedPlayer> players;
  friend bool operator==(const EnrichedFrame&, const EnrichedFrame&) = default;
};

}  // namespace trackenrich
