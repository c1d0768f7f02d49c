// ingest.hpp: readers for ground-truth tracking CSVs, event logs and 360-style
// broadcast frames, plus the JSON formats the pipeline writes.
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace trackenrich {

struct RosterEntry {
  int id = 0;
  std::string name;
  Team team = Team::Home;
};

struct TruthPlayer {
  int id = 0;
  PlayerTag tag;
  PitchPoint pos;
};

/// Native-rate ground-truth snapshot; players carry identities.
struct TruthFrame {
  double time = 0.0;
  PitchPoint ball;
  std::vector<TruthPlayer> players;
};

struct Event {
  double time = 0.0;
  std::string kind;
  std::optional<PitchPoint> ball;
  Team attacking_team = Team::Home;
};

struct MatchHalf {
  int half_id = 1;
  std::vector<RosterEntry> roster;
  std::vector<TruthFrame> frames;
  std::vector<Event> events;
  // Keeper identity per team, -1 when the team has no player on the pitch.
  std::array<int, 2> goalkeeper_id{-1, -1};
  bool home_attacks_positive_x = true;
  // Raw clock value subtracted to make times half-relative.
  double time_offset = 0.0;
};

struct TrackingData {
  std::vector<MatchHalf> halves;
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
  std::vector<std::string> warnings;
};

/// Reads a pair of wide tracking CSVs (one per team, percentage coordinates,
/// both carrying the ball) into per-half ground truth. Rows without a ball
/// are dropped and counted; columns that never hold data are discarded.
TrackingData read_tracking_csv(const std::filesystem::path& home_path, const std::filesystem::path& away_path);

/// Attaches a Metrica-style event CSV to already-loaded halves, converting
/// event times with each half's time offset.
void read_events_csv(const std::filesystem::path& path, std::vector<MatchHalf>& halves);

enum class RecordSource { Simulated, Broadcast360 };

struct DiscreteMatchRecord {
  int half_id = 1;
  RecordSource source = RecordSource::Simulated;
  bool home_attacks_positive_x = true;
  std::vector<ObservationFrame> frames;
  friend bool operator==(const DiscreteMatchRecord&, const DiscreteMatchRecord&) = default;
};

struct AxisErrorRecord {
  std::size_t frame_index = 0;
  std::string reason;
  std::optional<PitchPoint> ball_event;
  std::optional<PitchPoint> ball_frame;
  std::optional<double> disagreement;
  friend bool operator==(const AxisErrorRecord&, const AxisErrorRecord&) = default;
};

struct Read360Options {
  double axis_threshold = 5.0;
  // Name of the home side; defaults to the team of the first event.
  std::optional<std::string> home_team;
  double match_window_s = 2.0;
};

struct Read360Result {
  std::vector<DiscreteMatchRecord> halves;
  std::vector<AxisErrorRecord> errors;
};

/// x -> 120 - x, y -> 80 - y. An involution.
PitchPoint flip_axes(const PitchPoint& p);

Read360Result read_360_frames(const std::filesystem::path& frames_path, const std::filesystem::path& events_path,
                              const Read360Options& options = {});

void write_discrete(const DiscreteMatchRecord& record, const std::filesystem::path& path);
DiscreteMatchRecord read_discrete(const std::filesystem::path& path);

void write_enriched(const std::vector<EnrichedFrame>& frames, const std::filesystem::path& path);
std::vector<EnrichedFrame> read_enriched(const std::filesystem::path& path);

void write_axis_errors(const std::vector<AxisErrorRecord>& errors, const std::filesystem::path& path);
std::vector<AxisErrorRecord> read_axis_errors(const std::filesystem::path& path);

void write_trajectories(const std::vector<Trajectory>& trajectories, int half_id, const std::filesystem::path& path);
std::vector<Trajectory> read_trajectories(const std::filesystem::path& path, int* half_id = nullptr);

}  // namespace trackenrich
