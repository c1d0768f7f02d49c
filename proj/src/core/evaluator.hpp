// evaluator.hpp: scores reconstructed paths against ground truth.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/assigner.hpp"
#include "core/ingest.hpp"
#include "core/interpolator.hpp"

namespace trackenrich {

/// Assigned trajectories plus the velocity field their paths use.
struct HalfReconstruction {
  TrajectorySet set;
  VelocityField field;
};

HalfReconstruction reconstruct(const DiscreteMatchRecord& record, const ForecastModel& model, double alpha,
                               const AssignerConfig& cfg = {});

/// All 22 estimated players at time t, observed where the trajectory holds a
/// sighting at exactly t. `occlusion_s` (optional) receives, per player, the
/// seconds to the nearest observation in that player's trajectory.
EnrichedFrame enrich_at(const HalfReconstruction& recon, const ForecastModel& model, double t,
                        std::vector<double>* occlusion_s = nullptr);

/// Enriched frames every `step` seconds across the record's span.
std::vector<EnrichedFrame> enriched_frames(const HalfReconstruction& recon, const ForecastModel& model,
                                           const DiscreteMatchRecord& record, double step);

enum class Phase { InPhase, OutOfPhase };

struct PlayerError {
  Team team = Team::Home;
  PitchPoint truth;
  PitchPoint estimate;
  double error = 0.0;
  Provenance provenance = Provenance::Estimated;
  double seconds_to_nearest_observation = 0.0;
  bool observed_previous_frame = false;
};

struct FrameError {
  double time = 0.0;
  Phase phase = Phase::InPhase;
  std::vector<PlayerError> players;
  double total_squared_error = 0.0;
};

class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per team, the minimum-total-distance matching of estimated outfielders to
/// true outfielders; keepers are ignored. `occlusion_s`, when given, is
/// aligned with estimated.players.
FrameError match_and_score(const EnrichedFrame& estimated, const TruthFrame& truth,
                           const std::vector<double>* occlusion_s = nullptr);

struct CurveBucket {
  int bucket_s = 0;
  double mean = 0.0;
  double p12_5 = 0.0, p87_5 = 0.0, p2_5 = 0.0, p97_5 = 0.0;
  std::size_t n = 0;
};

struct ErrorSummary {
  double mean_all_in_phase = 0.0;
  double mean_offcam_in_phase = 0.0;
  double median_offcam_in_phase = 0.0;
  double mean_all_out_of_phase = 0.0;
  double mean_prev_frame_observed = 0.0;
  double mean_offcam_event_frames = 0.0;
  std::size_t frames = 0;
  std::size_t predictions = 0;
  std::size_t out_of_phase_frames = 0;
  std::size_t event_frames = 0;
  std::vector<CurveBucket> curve;
};

struct HalfEvaluation {
  int half_id = 1;
  std::vector<FrameError> in_phase;
  std::vector<FrameError> out_of_phase;
  std::vector<std::size_t> event_frame_indices;  // into in_phase
  // Query times whose truth snapshot did not field the expected outfielders.
  std::size_t skipped_frames = 0;
};

struct ErrorReport {
  ErrorSummary pooled;
  std::vector<std::pair<int, ErrorSummary>> per_half;
};

/// Scores every sampled (in-phase) frame time and every midpoint between
/// consecutive sampled frames (out-of-phase) of the record.
HalfEvaluation evaluate_half(const DiscreteMatchRecord& record, const HalfReconstruction& recon,
                             const ForecastModel& model, const MatchHalf& truth);

ErrorSummary summarize(const std::vector<const HalfEvaluation*>& halves);
ErrorReport build_report(const std::vector<HalfEvaluation>& halves);

/// Linear-interpolation quantile (q in [0,1]) of unsorted values.
double quantile(std::vector<double> values, double q);

struct SelectedFrame {
  double percentile = 0.0;
  double target = 0.0;
  std::size_t index = 0;
};

/// For each percentile, the earliest frame whose total squared error is
/// closest to that percentile of all frames. Needs at least `min_frames`.
std::vector<SelectedFrame> percentile_frames(const std::vector<FrameError>& frames, const std::vector<double>& percentiles,
                                             std::size_t min_frames = 100);

/// Trajectory points attributed to the wrong true player: compares each
/// observed point's true identity with the previous one in the same trajectory.
std::size_t count_identity_switches(const TrajectorySet& set, const MatchHalf& truth);

/// Pitch drawing with team-coloured discs, optional numerals per player and
/// the ball. Byte-identical for identical input.
std::string render_pitch_svg(const EnrichedFrame& frame, const std::vector<std::optional<int>>& annotations = {});
void write_pitch_svg(const EnrichedFrame& frame, const std::vector<std::optional<int>>& annotations,
                     const std::filesystem::path& path);

void write_report_json(const ErrorReport& report, const std::filesystem::path& path);
std::string report_table(const ErrorReport& report);
void write_curve_csv(const std::vector<CurveBucket>& curve, const std::filesystem::path& path);

}  // namespace trackenrich
