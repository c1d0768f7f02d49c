#include "core/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

namespace trackenrich {
namespace {

// Grid steps of history used to estimate the innovations feeding the MA terms.
constexpr int kHistoryWindow = 20;

}  // namespace

PitchPoint GridSeries::at(double t) const {
  if (values.empty()) throw PreconditionError("empty grid series");
  const double pos = t / step - static_cast<double>(start_k);
  if (pos <= 0.0) return values.front();
  const double last = static_cast<double>(values.size() - 1);
  if (pos >= last) return values.back();
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double f = pos - static_cast<double>(i);
  if (f <= kTimeEps) return values[i];
  return values[i] + f * (values[i + 1] - values[i]);
}

PitchPoint interpolate_trajectory(const Trajectory& traj, double t) {
  if (traj.empty()) throw PreconditionError("empty trajectory");
  const auto& pts = traj.points();
  const auto i = traj.last_at_or_before(t);
  if (i < 0) return pts.front().pos;
  const auto& a = pts[static_cast<std::size_t>(i)];
  if (std::abs(a.time - t) <= kTimeEps || static_cast<std::size_t>(i) + 1 >= pts.size()) return a.pos;
  const auto& b = pts[static_cast<std::size_t>(i) + 1];
  return a.pos + ((t - a.time) / (b.time - a.time)) * (b.pos - a.pos);
}

GridSeries resample_to_grid(const Trajectory& traj, double grid_step) {
  if (traj.empty()) throw PreconditionError("cannot resample an empty trajectory");
  GridSeries g;
  g.step = grid_step;
  const auto k0 = static_cast<long>(std::ceil(traj.front().time / grid_step - kTimeEps));
  const auto k1 = static_cast<long>(std::floor(traj.back().time / grid_step + kTimeEps));
  g.start_k = k0;
  for (long k = k0; k <= k1; ++k) g.values.push_back(interpolate_trajectory(traj, static_cast<double>(k) * grid_step));
  return g;
}

bool ar_is_stationary(std::span<const double> ar) {
  const auto p = static_cast<Eigen::Index>(ar.size());
  if (p == 0) return true;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) companion(0, i) = ar[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (std::abs(solver.eigenvalues()[i]) >= 1.0 - 1e-9) return false;
  }
  return true;
}

bool ma_is_invertible(std::span<const double> ma) {
  std::vector<double> neg(ma.begin(), ma.end());
  for (double& c : neg) c = -c;
  return ar_is_stationary(neg);
}

void ForecastModel::validate() const {
  if (!(grid_step > 0.0)) throw FitError("model grid step must be positive");
  if (!(resid_std > 0.0) || !(one_step_std > 0.0)) throw FitError("model standard deviations must be positive");
  if (ar.size() != static_cast<std::size_t>(orders.p) || ma.size() != static_cast<std::size_t>(orders.q) ||
      exog.size() != static_cast<std::size_t>(orders.r)) {
    throw FitError("model coefficient counts disagree with its orders");
  }
  auto finite = [](const std::vector<double>& v) { return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }); };
  if (!finite(ar) || !finite(ma) || !finite(exog) || !std::isfinite(intercept)) throw FitError("non-finite model coefficient");
  if (!ar_is_stationary(ar)) throw FitError("AR polynomial is not stationary");
  if (!ma_is_invertible(ma)) throw FitError("MA polynomial is not invertible");
}

ForecastModel ForecastModel::random_walk(double one_step_std, double resid_std, double grid_step) {
  ForecastModel m;
  m.orders = {0, 0, 0};
  m.grid_step = grid_step;
  m.one_step_std = one_step_std;
  m.resid_std = resid_std;
  return m;
}

std::size_t TrainingSet::total_steps() const {
  std::size_t n = 0;
  for (const auto& t : tracks) n += t.positions.values.size() > 1 ? t.positions.values.size() - 1 : 0;
  return n;
}

namespace {

// One scalar displacement series with aligned ball displacements.
struct AxisSeries {
  std::vector<double> d;
  std::vector<double> b;
};

std::vector<AxisSeries> build_axis_series(const TrainingSet& training, double grid_step) {
  std::vector<AxisSeries> out;
  for (const auto& track : training.tracks) {
    const auto& vals = track.positions.values;
    if (vals.size() < 2) continue;
    if (std::abs(track.positions.step - grid_step) > kTimeEps) throw FitError("training series grid step mismatch");
    const GridSeries& ball = training.balls.at(track.ball);
    for (int axis = 0; axis < 2; ++axis) {
      AxisSeries s;
      for (std::size_t i = 1; i < vals.size(); ++i) {
        const PitchPoint b1 = ball.at(track.positions.time_of(i));
        const PitchPoint b0 = ball.at(track.positions.time_of(i - 1));
        if (axis == 0) {
          s.d.push_back(vals[i].x - vals[i - 1].x);
          s.b.push_back(b1.x - b0.x);
        } else {
          s.d.push_back(vals[i].y - vals[i - 1].y);
          s.b.push_back(b1.y - b0.y);
        }
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

struct Ols {
  Eigen::MatrixXd xtx;
  Eigen::VectorXd xty;
  std::size_t rows = 0;

  explicit Ols(Eigen::Index n) : xtx(Eigen::MatrixXd::Zero(n, n)), xty(Eigen::VectorXd::Zero(n)) {}
  void add(const Eigen::VectorXd& x, double y) {
    xtx.selfadjointView<Eigen::Lower>().rankUpdate(x);
    xty += y * x;
    ++rows;
  }
  Eigen::VectorXd solve() const {
    Eigen::MatrixXd full = xtx.selfadjointView<Eigen::Lower>();
    return Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(full).solve(xty);
  }
};

// Regressor layout: [1, d lags 1..p, innovation lags 1..q, ball lags 0..r-1].
bool fill_row(Eigen::VectorXd& row, const AxisSeries& s, const std::vector<double>& innov, std::size_t i, int p, int q,
              int r) {
  const auto ip = static_cast<long>(i);
  if (ip - p < 0 || ip - q < 0 || ip - (r - 1) < 0) return false;
  Eigen::Index c = 0;
  row(c++) = 1.0;
  for (int l = 1; l <= p; ++l) row(c++) = s.d[i - static_cast<std::size_t>(l)];
  for (int l = 1; l <= q; ++l) {
    const double e = innov[i - static_cast<std::size_t>(l)];
    if (!std::isfinite(e)) return false;
    row(c++) = e;
  }
  for (int l = 0; l < r; ++l) row(c++) = s.b[i - static_cast<std::size_t>(l)];
  return true;
}

struct StageResult {
  Eigen::VectorXd beta;
  std::vector<std::vector<double>> residuals;
  double ssr = 0.0;
  std::size_t rows = 0;
};

StageResult regress(const std::vector<AxisSeries>& series, const std::vector<std::vector<double>>& innov, int p, int q,
                    int r) {
  const Eigen::Index n = 1 + p + q + r;
  Ols ols(n);
  Eigen::VectorXd row(n);
  for (std::size_t s = 0; s < series.size(); ++s) {
    for (std::size_t i = 0; i < series[s].d.size(); ++i) {
      if (fill_row(row, series[s], innov[s], i, p, q, r)) ols.add(row, series[s].d[i]);
    }
  }
  if (ols.rows <= static_cast<std::size_t>(n)) throw FitError("too few usable training rows for the requested orders");
  StageResult out;
  out.beta = ols.solve();
  out.rows = ols.rows;
  for (std::size_t s = 0; s < series.size(); ++s) {
    std::vector<double> res(series[s].d.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < series[s].d.size(); ++i) {
      if (!fill_row(row, series[s], innov[s], i, p, q, r)) continue;
      res[i] = series[s].d[i] - row.dot(out.beta);
      out.ssr += res[i] * res[i];
    }
    out.residuals.push_back(std::move(res));
  }
  return out;
}

}  // namespace

ForecastModel fit(const TrainingSet& training, const FitOptions& options) {
  const auto& o = options.orders;
  if (o.p < 0 || o.q < 0 || o.r < 0) throw FitError("model orders must be non-negative");
  if (training.total_steps() < options.min_steps) {
    std::ostringstream msg;
    msg << "training data has " << training.total_steps() << " grid steps, need at least " << options.min_steps;
    throw FitError(msg.str());
  }
  const auto series = build_axis_series(training, options.grid_step);

  // Innovation estimates from a long autoregression; unused when q = 0.
  std::vector<std::vector<double>> none;
  for (const auto& s : series) none.emplace_back(s.d.size(), 0.0);
  std::vector<std::vector<double>> innov = none;
  if (o.q > 0) innov = regress(series, none, std::max(options.long_ar_order, o.p + o.q), 0, o.r).residuals;

  ForecastModel model;
  model.grid_step = options.grid_step;
  std::string last_failure;
  bool done = false;
  for (int p = o.p; p >= 0 && !done; --p) {
    for (int q = o.q; q >= 0; --q) {
      const StageResult st = regress(series, innov, p, q, o.r);
      const Eigen::Index n = st.beta.size();
      model.orders = {p, q, o.r};
      model.intercept = st.beta(0);
      model.ar.assign(st.beta.data() + 1, st.beta.data() + 1 + p);
      model.ma.assign(st.beta.data() + 1 + p, st.beta.data() + 1 + p + q);
      model.exog.assign(st.beta.data() + 1 + p + q, st.beta.data() + n);
      const auto dof = st.rows > static_cast<std::size_t>(n) ? st.rows - static_cast<std::size_t>(n) : 1;
      model.resid_std = std::max(std::sqrt(st.ssr / static_cast<double>(dof)), options.min_std);
      if (!ar_is_stationary(model.ar)) {
        std::ostringstream msg;
        msg << "AR(" << p << ") fit is non-stationary";
        last_failure = msg.str();
        break;  // a smaller MA order will not fix the AR part
      }
      // an explosive MA part makes the in-window residual recursion diverge
      if (ma_is_invertible(model.ma)) {
        last_failure.clear();
        done = true;
        break;
      }
      std::ostringstream msg;
      msg << "MA(" << q << ") fit is not invertible";
      last_failure = msg.str();
    }
  }
  if (!last_failure.empty()) throw FitError(last_failure);

  double sum = 0.0, sum2 = 0.0;
  std::size_t count = 0;
  for (const auto& s : series) {
    for (double v : s.d) { sum += v; ++count; }
  }
  const double mean = count ? sum / static_cast<double>(count) : 0.0;
  for (const auto& s : series) {
    for (double v : s.d) sum2 += (v - mean) * (v - mean);
  }
  const double var = count > 1 ? sum2 / static_cast<double>(count - 1) : 0.0;
  model.one_step_std = std::max(std::sqrt(var), options.min_std);
  model.validate();
  return model;
}

std::vector<double> armax_mean_path(const ForecastModel& model, std::span<const double> history,
                                    std::span<const double> ball, int steps) {
  const int p = model.orders.p, q = model.orders.q, r = model.orders.r;
  const auto hist = static_cast<long>(history.size());
  const auto total = hist + steps;
  if (static_cast<long>(ball.size()) < total) throw PreconditionError("ball displacements do not cover the horizon");
  std::vector<double> d(static_cast<std::size_t>(total), 0.0);
  std::vector<double> e(static_cast<std::size_t>(total), 0.0);
  auto lag = [](const std::vector<double>& v, long i) { return i >= 0 ? v[static_cast<std::size_t>(i)] : 0.0; };
  auto predict = [&](long i) {
    double v = model.intercept;
    for (int l = 1; l <= p; ++l) v += model.ar[static_cast<std::size_t>(l - 1)] * lag(d, i - l);
    for (int l = 1; l <= q; ++l) v += model.ma[static_cast<std::size_t>(l - 1)] * lag(e, i - l);
    for (int l = 0; l < r; ++l) {
      if (i - l >= 0) v += model.exog[static_cast<std::size_t>(l)] * ball[static_cast<std::size_t>(i - l)];
    }
    return v;
  };
  for (long i = 0; i < hist; ++i) {
    d[static_cast<std::size_t>(i)] = history[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)] - predict(i);
  }
  std::vector<double> cumulative;
  cumulative.reserve(static_cast<std::size_t>(steps));
  double acc = 0.0;
  for (long i = hist; i < total; ++i) {
    d[static_cast<std::size_t>(i)] = predict(i);
    acc += d[static_cast<std::size_t>(i)];
    cumulative.push_back(acc);
  }
  return cumulative;
}

double armax_horizon_std(const ForecastModel& model, int steps) {
  // psi weights of the displacement process, partial sums give the weights
  // of each innovation in the cumulative position error.
  std::vector<double> psi(static_cast<std::size_t>(std::max(steps, 1)), 0.0);
  psi[0] = 1.0;
  for (int j = 1; j < steps; ++j) {
    double v = j <= model.orders.q ? model.ma[static_cast<std::size_t>(j - 1)] : 0.0;
    for (int i = 1; i <= std::min(j, model.orders.p); ++i) v += model.ar[static_cast<std::size_t>(i - 1)] * psi[static_cast<std::size_t>(j - i)];
    psi[static_cast<std::size_t>(j)] = v;
  }
  double partial = 0.0, var = 0.0;
  for (int m = 0; m < steps; ++m) {
    partial += psi[static_cast<std::size_t>(m)];
    var += partial * partial;
  }
  return model.resid_std * std::sqrt(var);
}

namespace {

// Forecast in "u-time": u = direction * t, so a backward forecast is a
// forward forecast on the time-reversed trajectory and ball.
Forecast forecast_directed(const ForecastModel& model, const Trajectory& traj, const GridSeries& ball, double t,
                           int direction) {
  if (traj.empty()) throw PreconditionError("forecast needs a non-empty trajectory (initialise it first)");
  const TrajectoryPoint& anchor = direction > 0 ? traj.back() : traj.front();
  const double step = model.grid_step;
  const double u_anchor = direction * anchor.time;
  const double h = (direction * t - u_anchor) / step;
  if (h < -kTimeEps) throw PreconditionError("forecast time precedes the trajectory anchor");

  if (h <= 1.0 + kTimeEps) {
    const double scale = std::abs(h - 1.0) <= kTimeEps ? 1.0 : std::sqrt(std::max(h, 1e-6));
    return {clamp_to_pitch(anchor.pos), model.one_step_std * scale};
  }

  const int n_hi = static_cast<int>(std::ceil(h - kTimeEps));
  const int n_lo = static_cast<int>(std::floor(h + kTimeEps));
  const double span = traj.back().time - traj.front().time;
  const int hist = std::min(kHistoryWindow, static_cast<int>(std::floor(span / step + kTimeEps)));

  auto player_at = [&](double u) { return interpolate_trajectory(traj, direction * u); };
  auto ball_at = [&](double u) { return ball.at(direction * u); };

  std::vector<PitchPoint> pos(static_cast<std::size_t>(hist) + 1);
  for (int i = 0; i <= hist; ++i) pos[static_cast<std::size_t>(i)] = player_at(u_anchor - (hist - i) * step);
  std::vector<double> hx, hy, bx, by;
  for (int i = 0; i < hist; ++i) {
    const Vec2 d = pos[static_cast<std::size_t>(i) + 1] - pos[static_cast<std::size_t>(i)];
    hx.push_back(d.x);
    hy.push_back(d.y);
  }
  for (int i = 0; i < hist + n_hi; ++i) {
    const Vec2 d = ball_at(u_anchor + (i - hist + 1) * step) - ball_at(u_anchor + (i - hist) * step);
    bx.push_back(d.x);
    by.push_back(d.y);
  }
  const auto cx = armax_mean_path(model, hx, bx, n_hi);
  const auto cy = armax_mean_path(model, hy, by, n_hi);

  auto at_steps = [&](int n) -> Forecast {
    if (n <= 1) return {anchor.pos, model.one_step_std};
    return {anchor.pos + Vec2{cx[static_cast<std::size_t>(n - 1)], cy[static_cast<std::size_t>(n - 1)]},
            armax_horizon_std(model, n)};
  };
  Forecast out = at_steps(n_hi);
  if (n_lo != n_hi) {
    const Forecast lo = at_steps(n_lo);
    const double f = h - n_lo;
    out.mean = lo.mean + f * (out.mean - lo.mean);
    out.std = lo.std + f * (out.std - lo.std);
  }
  out.mean = clamp_to_pitch(out.mean);
  return out;
}

}  // namespace

Forecast forecast(const ForecastModel& model, const Trajectory& traj, const GridSeries& ball, double t) {
  return forecast_directed(model, traj, ball, t, +1);
}

Forecast backward_forecast(const ForecastModel& model, const Trajectory& traj, const GridSeries& ball, double t) {
  return forecast_directed(model, traj, ball, t, -1);
}

void save_model(const ForecastModel& model, const std::filesystem::path& path) {
  model.validate();
  nlohmann::ordered_json j;
  j["format"] = "track-enrich-model";
  j["version"] = 1;
  j["grid_step"] = model.grid_step;
  j["orders"] = {{"p", model.orders.p}, {"q", model.orders.q}, {"r", model.orders.r}};
  j["ar"] = model.ar;
  j["ma"] = model.ma;
  j["exog"] = model.exog;
  j["intercept"] = model.intercept;
  j["resid_std"] = model.resid_std;
  j["one_step_std"] = model.one_step_std;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("I/O error writing " + path.string());
}

ForecastModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.value("format", "") != "track-enrich-model") throw MalformedInput("not a model file: " + path.string());
    if (j.at("version").get<int>() != 1) throw MalformedInput("unsupported model version in " + path.string());
    ForecastModel m;
    m.grid_step = j.at("grid_step").get<double>();
    m.orders = {j.at("orders").at("p").get<int>(), j.at("orders").at("q").get<int>(), j.at("orders").at("r").get<int>()};
    m.ar = j.at("ar").get<std::vector<double>>();
    m.ma = j.at("ma").get<std::vector<double>>();
    m.exog = j.at("exog").get<std::vector<double>>();
    m.intercept = j.at("intercept").get<double>();
    m.resid_std = j.at("resid_std").get<double>();
    m.one_step_std = j.at("one_step_std").get<double>();
    try {
      m.validate();
    } catch (const FitError& e) {
      throw MalformedInput("invalid model in " + path.string() + ": " + e.what());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput("malformed model file " + path.string() + ": " + e.what());
  }
}

std::string model_summary(const ForecastModel& model) {
  std::ostringstream os;
  auto list = [&](const std::vector<double>& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ']';
  };
  os << "ARMAX(p=" << model.orders.p << ", q=" << model.orders.q << ", r=" << model.orders.r
     << ") grid_step=" << model.grid_step << "s\n  ar=";
  list(model.ar);
  os << "\n  ma=";
  list(model.ma);
  os << "\n  exog=";
  list(model.exog);
  os << "\n  intercept=" << model.intercept << " resid_std=" << model.resid_std << "m one_step_std=" << model.one_step_std
     << "m\n";
  return os.str();
}

}  // namespace trackenrich
