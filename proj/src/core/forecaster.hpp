// forecaster.hpp: Gaussian position forecasts N(mean, std^2 I) for a player
// from their past trajectory and the ball path.
//
// Displacements on a regular grid follow an ARMAX(p, q, r) process
//
//   d_k = c + sum_i a_i d_{k-i} + sum_j m_j e_{k-j} + sum_l g_l b_{k-l} + e_k
//
// where d is the per-axis player displacement, b the per-axis ball
// displacement (lags 0..r-1, so the concurrent ball step is used) and e the
// innovation. Both axes share one set of coefficients. A forecast one grid
// step ahead is a random walk with scale `one_step_std`; longer horizons use
// the ARMAX mean recursion and its theoretical forecast variance.
#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace trackenrich {

/// Values on the grid k * step for k = start_k, start_k + 1, ...
struct GridSeries {
  long start_k = 0;
  double step = 1.0;
  std::vector<PitchPoint> values;

  bool empty() const { return values.empty(); }
  double time_of(std::size_t i) const { return static_cast<double>(start_k + static_cast<long>(i)) * step; }
  double first_time() const { return time_of(0); }
  double last_time() const { return time_of(values.size() - 1); }
  /// Linear interpolation between grid values, held constant past either end.
  PitchPoint at(double t) const;
};

/// Linear interpolation of a trajectory (time must lie within its span).
PitchPoint interpolate_trajectory(const Trajectory& traj, double t);

/// Samples the trajectory on every grid time inside its span.
GridSeries resample_to_grid(const Trajectory& traj, double grid_step);

struct ArmaxOrders {
  int p = 2;
  int q = 1;
  int r = 2;
};

struct ForecastModel {
  ArmaxOrders orders;
  double grid_step = 1.0;
  std::vector<double> ar;
  std::vector<double> ma;
  std::vector<double> exog;
  double intercept = 0.0;
  double resid_std = 1.0;
  double one_step_std = 1.0;

  /// Checks std positivity, coefficient counts, AR stationarity and MA invertibility.
  void validate() const;
  /// A model whose forecasts never move: zero coefficients.
  static ForecastModel random_walk(double one_step_std, double resid_std, double grid_step = 1.0);
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True when every root of 1 - a_1 z - ... - a_p z^p lies outside the unit circle.
bool ar_is_stationary(std::span<const double> ar);
/// True when 1 + ma_1 z + ... + ma_q z^q has all roots outside the unit circle.
bool ma_is_invertible(std::span<const double> ma);

struct TrainingSet {
  struct Track {
    GridSeries positions;
    std::size_t ball = 0;  // index into balls
  };
  std::vector<GridSeries> balls;
  std::vector<Track> tracks;

  std::size_t total_steps() const;
};

struct FitOptions {
  ArmaxOrders orders;
  double grid_step = 1.0;
  int long_ar_order = 10;
  std::size_t min_steps = 500;
  double min_std = 0.01;
};

/// Hannan-Rissanen estimate: a long AR fit supplies innovation estimates,
/// then ordinary least squares on the ARMAX regressors. The AR order is
/// lowered until the fitted polynomial is stationary, the MA order until
/// the MA polynomial is invertible.
ForecastModel fit(const TrainingSet& training, const FitOptions& options = {});

struct Forecast {
  PitchPoint mean;
  double std = 1.0;
};

/// Forecast for a time at or after the last trajectory point.
Forecast forecast(const ForecastModel& model, const Trajectory& traj, const GridSeries& ball, double t);
/// Time-reversed forecast for a time at or before the first trajectory point.
Forecast backward_forecast(const ForecastModel& model, const Trajectory& traj, const GridSeries& ball, double t);

/// Unclamped ARMAX mean of the cumulative displacement after `steps` grid
/// steps, one axis. `history` holds past displacements oldest first,
/// `ball` the ball displacements aligned so ball[history.size() + j - 1] is
/// the step ending j steps after the anchor. Exposed for testing.
std::vector<double> armax_mean_path(const ForecastModel& model, std::span<const double> history,
                                    std::span<const double> ball, int steps);

/// Standard deviation of the cumulative position error after n >= 1 steps
/// under the ARMAX process (without the one-step random-walk rule).
double armax_horizon_std(const ForecastModel& model, int steps);

void save_model(const ForecastModel& model, const std::filesystem::path& path);
ForecastModel load_model(const std::filesystem::path& path);
std::string model_summary(const ForecastModel& model);

}  // namespace trackenrich
