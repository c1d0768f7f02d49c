// track-enrich: command line front end over the C library.
//
//   track-enrich train|simulate-broadcast|enrich|evaluate [--config file] [flags]
//
// Every flag can also be given as a flat `key = value` line in the config
// file, using the flag name without dashes in front (e.g. `sample-period = 1`).
// Flags on the command line win over the file.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "track_enrich/track_enrich.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel g_log = LogLevel::Info;

void read_log_level() {
  const char* env = std::getenv("TRACK_ENRICH_LOG");
  if (!env) return;
  const std::string v = env;
  if (v == "quiet" || v == "0" || v == "error") g_log = LogLevel::Quiet;
  else if (v == "debug" || v == "2") g_log = LogLevel::Debug;
  else g_log = LogLevel::Info;
}

__attribute__((format(printf, 2, 3))) void log_at(LogLevel level, const char* fmt, ...) {
  if (static_cast<int>(g_log) < static_cast<int>(level)) return;
  va_list ap;
  va_start(ap, fmt);
  std::vfprintf(stderr, fmt, ap);
  va_end(ap);
  std::fputc('\n', stderr);
}

// Thrown for problems the user can fix in the config or flags.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(te_status s, const std::string& context) {
  if (s == TE_OK) return;
  const std::string msg = context + ": " + te_status_name(s) + ": " + te_last_error();
  if (s == TE_ERR_INVALID_ARGUMENT) throw ConfigError(msg);
  throw RuntimeError(msg);
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using MatchPtr = std::unique_ptr<te_match, Deleter<te_match, te_match_free>>;
using ModelPtr = std::unique_ptr<te_model, Deleter<te_model, te_model_free>>;
using RecordPtr = std::unique_ptr<te_record, Deleter<te_record, te_record_free>>;
using B360Ptr = std::unique_ptr<te_broadcast360, Deleter<te_broadcast360, te_broadcast360_free>>;
using ReconPtr = std::unique_ptr<te_reconstruction, Deleter<te_reconstruction, te_reconstruction_free>>;
using ReportPtr = std::unique_ptr<te_report, Deleter<te_report, te_report_free>>;

struct Config {
  std::string tracking_home;
  std::string tracking_away;
  std::string events;
  std::vector<std::string> train_home;
  std::vector<std::string> train_away;
  std::string frames_360;
  std::string events_360;
  std::string home_team;
  std::vector<std::string> records;
  std::string model = "model.json";
  std::string out_dir = "out";
  std::string report_dir;

  double sample_period = 1.0;
  double visibility_radius = 30.0;
  int trim_frames = 30;
  int ar_order = 2;
  int ma_order = 1;
  int exog_order = 2;
  double grid_step = 1.0;
  double alpha = 0.5;
  double axis_threshold = 5.0;
  double log_density_floor = -50.0;
  double output_step = 1.0;
  std::vector<double> percentiles{25.0, 50.0, 75.0, 95.0};
};

void require_file(const std::string& path, const char* key) {
  if (path.empty()) throw ConfigError(std::string("missing required setting '") + key + "'");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ConfigError(std::string(key) + ": input path does not exist: " + path);
}

void require_range(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void validate_numbers(const Config& c) {
  require_range(c.sample_period > 0.0, "sample-period must be positive");
  require_range(c.visibility_radius > 0.0, "visibility-radius must be positive");
  require_range(c.trim_frames >= 0, "trim-frames must be non-negative");
  require_range(c.ar_order >= 0 && c.ma_order >= 0 && c.exog_order >= 0, "model orders must be non-negative");
  require_range(c.grid_step > 0.0, "grid-step must be positive");
  require_range(c.alpha >= 0.0 && c.alpha <= 1.0, "alpha must lie in [0, 1]");
  require_range(c.axis_threshold > 0.0, "axis-threshold must be positive");
  require_range(std::isfinite(c.log_density_floor), "log-density-floor must be finite");
  require_range(c.output_step > 0.0, "output-step must be positive");
  for (double p : c.percentiles) require_range(p >= 0.0 && p <= 100.0, "percentiles must lie in [0, 100]");
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeError("cannot create directory " + dir + ": " + ec.message());
}

std::string half_file(const std::string& dir, const char* stem, int half_id) {
  return (fs::path(dir) / (std::string(stem) + "_h" + std::to_string(half_id) + ".json")).string();
}

MatchPtr load_match(const std::string& home, const std::string& away) {
  te_match* m = nullptr;
  check(te_match_load(home.c_str(), away.c_str(), &m), "loading " + home + " / " + away);
  MatchPtr match(m);
  log_at(LogLevel::Info, "loaded %zu half(s) from %s, %zu row(s) dropped", te_match_half_count(m), home.c_str(),
         te_match_rows_dropped(m));
  for (size_t i = 0; i < te_match_warning_count(m); ++i) log_at(LogLevel::Info, "warning: %s", te_match_warning(m, i));
  return match;
}

ModelPtr load_model(const std::string& path) {
  te_model* m = nullptr;
  check(te_model_load(path.c_str(), &m), "loading model " + path);
  return ModelPtr(m);
}

// Records named by --record, else every record_h<N>.json in the output dir.
std::vector<std::string> record_paths(const Config& c) {
  if (!c.records.empty()) return c.records;
  std::map<int, std::string> found;
  std::error_code ec;
  const std::regex pat("record_h([0-9]+)\\.json");
  for (const auto& e : fs::directory_iterator(c.out_dir, ec)) {
    std::smatch m;
    const std::string name = e.path().filename().string();
    if (std::regex_match(name, m, pat)) found.emplace(std::stoi(m[1].str()), e.path().string());
  }
  std::vector<std::string> out;
  for (auto& [id, p] : found) out.push_back(p);
  if (out.empty()) {
    throw ConfigError("no discrete records: give --record or run simulate-broadcast into " + c.out_dir);
  }
  return out;
}

int cmd_train(const Config& c) {
  std::vector<std::string> homes = c.train_home, aways = c.train_away;
  if (homes.empty() && !c.tracking_home.empty()) {
    homes.push_back(c.tracking_home);
    aways.push_back(c.tracking_away);
  }
  if (homes.empty()) throw ConfigError("missing required setting 'train-home' (or 'tracking-home')");
  if (homes.size() != aways.size()) throw ConfigError("train-home and train-away must be given in pairs");
  for (size_t i = 0; i < homes.size(); ++i) {
    require_file(homes[i], "train-home");
    require_file(aways[i], "train-away");
  }
  std::vector<MatchPtr> matches;
  std::vector<const te_match*> raw;
  for (size_t i = 0; i < homes.size(); ++i) {
    matches.push_back(load_match(homes[i], aways[i]));
    raw.push_back(matches.back().get());
  }
  te_fit_options fo{c.ar_order, c.ma_order, c.exog_order, c.grid_step};
  te_model* m = nullptr;
  check(te_model_fit(raw.data(), raw.size(), &fo, &m), "fitting model");
  ModelPtr model(m);
  const fs::path parent = fs::path(c.model).parent_path();
  if (!parent.empty()) make_dir(parent.string());
  check(te_model_save(model.get(), c.model.c_str()), "saving model");
  size_t needed = 0;
  te_model_summary(model.get(), nullptr, 0, &needed);
  std::string summary(needed, '\0');
  check(te_model_summary(model.get(), summary.data(), summary.size(), &needed), "summarising model");
  summary.resize(needed - 1);
  std::printf("%s\nmodel written to %s\n", summary.c_str(), c.model.c_str());
  return 0;
}

int cmd_simulate(const Config& c) {
  require_file(c.tracking_home, "tracking-home");
  require_file(c.tracking_away, "tracking-away");
  MatchPtr match = load_match(c.tracking_home, c.tracking_away);
  make_dir(c.out_dir);
  te_degrade_options opts{c.sample_period, c.visibility_radius, c.trim_frames};
  for (size_t i = 0; i < te_match_half_count(match.get()); ++i) {
    const int half_id = te_match_half_id(match.get(), i);
    te_record* r = nullptr;
    check(te_simulate_broadcast(match.get(), i, &opts, &r), "simulating half " + std::to_string(half_id));
    RecordPtr rec(r);
    te_degrade_summary s{};
    check(te_record_degrade_summary(match.get(), i, rec.get(), &s), "summarising half " + std::to_string(half_id));
    const std::string path = half_file(c.out_dir, "record", half_id);
    check(te_record_save(rec.get(), path.c_str()), "writing " + path);
    std::printf("half %d: %zu frames, %.2f visible outfielders per frame, %zu hidden -> %s\n", half_id, s.frames,
                s.mean_visible_outfielders, s.hidden_outfielders, path.c_str());
  }
  return 0;
}

int cmd_enrich(const Config& c) {
  require_file(c.model, "model");
  const bool is360 = !c.frames_360.empty();
  if (is360) {
    require_file(c.frames_360, "frames-360");
    require_file(c.events_360, "events-360");
  } else {
    for (const auto& p : record_paths(c)) require_file(p, "record");
  }
  ModelPtr model = load_model(c.model);
  make_dir(c.out_dir);

  std::vector<RecordPtr> records;
  if (is360) {
    te_360_options o{c.axis_threshold, c.home_team.empty() ? nullptr : c.home_team.c_str()};
    te_broadcast360* b = nullptr;
    check(te_broadcast360_load(c.frames_360.c_str(), c.events_360.c_str(), &o, &b), "reading 360 input");
    B360Ptr data(b);
    const std::string errors = (fs::path(c.out_dir) / "errors.json").string();
    check(te_broadcast360_write_errors(data.get(), errors.c_str()), "writing " + errors);
    std::printf("%zu frame(s) rejected -> %s\n", te_broadcast360_error_count(data.get()), errors.c_str());
    for (size_t i = 0; i < te_broadcast360_half_count(data.get()); ++i) {
      te_record* r = nullptr;
      check(te_broadcast360_record(data.get(), i, &r), "extracting half");
      records.emplace_back(r);
      const std::string path = half_file(c.out_dir, "record", te_record_half_id(r));
      check(te_record_save(r, path.c_str()), "writing " + path);
    }
  } else {
    for (const auto& p : record_paths(c)) {
      te_record* r = nullptr;
      check(te_record_load(p.c_str(), &r), "reading " + p);
      records.emplace_back(r);
    }
  }

  te_enrich_options eo{c.alpha, c.log_density_floor};
  size_t frames = 0;
  double seconds = 0.0;
  for (const auto& rec : records) {
    const int half_id = te_record_half_id(rec.get());
    const auto t0 = std::chrono::steady_clock::now();
    te_reconstruction* r = nullptr;
    check(te_reconstruct(rec.get(), model.get(), &eo, &r), "reconstructing half " + std::to_string(half_id));
    ReconPtr recon(r);
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    frames += te_record_frame_count(rec.get());
    const std::string enriched = half_file(c.out_dir, "enriched", half_id);
    const std::string trajectories = half_file(c.out_dir, "trajectories", half_id);
    check(te_reconstruction_write_enriched(recon.get(), model.get(), rec.get(), c.output_step, enriched.c_str()),
          "writing " + enriched);
    check(te_reconstruction_save(recon.get(), trajectories.c_str()), "writing " + trajectories);
    std::printf("half %d: %zu frames -> %s, %s\n", half_id, te_record_frame_count(rec.get()), enriched.c_str(),
                trajectories.c_str());
  }
  const double per_frame = frames ? seconds / static_cast<double>(frames) : 0.0;
  std::printf("throughput: %zu frames in %.3f s (%.5f s/frame)\n", frames, seconds, per_frame);
  return 0;
}

int cmd_evaluate(const Config& c) {
  require_file(c.tracking_home, "tracking-home");
  require_file(c.tracking_away, "tracking-away");
  require_file(c.model, "model");
  if (!c.events.empty()) require_file(c.events, "events");
  const auto paths = record_paths(c);
  for (const auto& p : paths) require_file(p, "record");

  MatchPtr truth = load_match(c.tracking_home, c.tracking_away);
  if (!c.events.empty()) check(te_match_load_events(truth.get(), c.events.c_str()), "reading " + c.events);
  ModelPtr model = load_model(c.model);

  std::vector<RecordPtr> records;
  std::vector<ReconPtr> recons;
  for (const auto& p : paths) {
    te_record* r = nullptr;
    check(te_record_load(p.c_str(), &r), "reading " + p);
    records.emplace_back(r);
    const std::string traj = half_file(c.out_dir, "trajectories", te_record_half_id(r));
    require_file(traj, "trajectories (run enrich first)");
    te_reconstruction* rc = nullptr;
    check(te_reconstruction_load(traj.c_str(), r, model.get(), c.alpha, &rc), "reading " + traj);
    recons.emplace_back(rc);
  }
  std::vector<const te_record*> rec_raw;
  std::vector<const te_reconstruction*> recon_raw;
  for (size_t i = 0; i < records.size(); ++i) {
    rec_raw.push_back(records[i].get());
    recon_raw.push_back(recons[i].get());
  }
  te_report* rp = nullptr;
  check(te_evaluate(truth.get(), rec_raw.data(), recon_raw.data(), rec_raw.size(), model.get(), c.percentiles.data(),
                    c.percentiles.size(), &rp),
        "evaluating");
  ReportPtr report(rp);
  const std::string dir = c.report_dir.empty() ? (fs::path(c.out_dir) / "report").string() : c.report_dir;
  check(te_report_write(report.get(), dir.c_str()), "writing report to " + dir);

  size_t needed = 0;
  te_report_table(report.get(), nullptr, 0, &needed);
  std::string table(needed, '\0');
  check(te_report_table(report.get(), table.data(), table.size(), &needed), "formatting report");
  table.resize(needed - 1);
  std::printf("%s", table.c_str());
  te_report_summary s{};
  check(te_report_summary_get(report.get(), &s), "reading report");
  if (s.skipped_frames) log_at(LogLevel::Info, "warning: %zu frame(s) skipped for inconsistent ground truth", s.skipped_frames);
  if (!c.percentiles.empty() && s.example_frames == 0) {
    log_at(LogLevel::Info, "warning: too few frames for percentile examples; no SVG written");
  }
  std::printf("report written to %s\n", dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  read_log_level();
  Config c;
  CLI::App app{"Reconstruct full player tracking from broadcast-like partial observations."};
  app.set_version_flag("--version", std::string(te_version()));
  app.set_config("--config", "", "Flat key = value config file; flags override it");

  app.add_option("--tracking-home", c.tracking_home, "Ground-truth tracking CSV, home team");
  app.add_option("--tracking-away", c.tracking_away, "Ground-truth tracking CSV, away team");
  app.add_option("--events", c.events, "Event CSV for the ground-truth match");
  app.add_option("--train-home", c.train_home, "Training tracking CSV(s), home team");
  app.add_option("--train-away", c.train_away, "Training tracking CSV(s), away team");
  app.add_option("--frames-360", c.frames_360, "360-style frames JSON");
  app.add_option("--events-360", c.events_360, "Event JSON matching the 360 frames");
  app.add_option("--home-team", c.home_team, "Home team name in the 360 events");
  app.add_option("--record", c.records, "Discrete record JSON(s) to enrich or evaluate");
  app.add_option("--model", c.model, "Model file")->capture_default_str();
  app.add_option("--out-dir", c.out_dir, "Working/output directory")->capture_default_str();
  app.add_option("--report-dir", c.report_dir, "Report directory (default <out-dir>/report)");
  app.add_option("--sample-period", c.sample_period, "Broadcast sampling period, seconds")->capture_default_str();
  app.add_option("--visibility-radius", c.visibility_radius, "Camera radius around the ball, metres")
      ->capture_default_str();
  app.add_option("--trim-frames", c.trim_frames, "Sampled frames dropped at each end of a half")->capture_default_str();
  app.add_option("--ar-order", c.ar_order, "AR order p")->capture_default_str();
  app.add_option("--ma-order", c.ma_order, "MA order q")->capture_default_str();
  app.add_option("--exog-order", c.exog_order, "Ball lags r")->capture_default_str();
  app.add_option("--grid-step", c.grid_step, "Model grid step, seconds")->capture_default_str();
  app.add_option("--alpha", c.alpha, "Crowd velocity weight")->capture_default_str();
  app.add_option("--axis-threshold", c.axis_threshold, "Tolerated 360 ball disagreement, metres")->capture_default_str();
  app.add_option("--log-density-floor", c.log_density_floor, "Floor on assignment log-likelihoods")
      ->capture_default_str();
  app.add_option("--output-step", c.output_step, "Enriched output interval, seconds")->capture_default_str();
  app.add_option("--percentiles", c.percentiles, "Percentiles of example frames to draw")->capture_default_str();

  auto* train = app.add_subcommand("train", "Fit the forecasting model on ground-truth tracking");
  auto* simulate = app.add_subcommand("simulate-broadcast", "Degrade ground truth into discrete records");
  auto* enrich = app.add_subcommand("enrich", "Reconstruct every player from discrete records or 360 frames");
  auto* evaluate = app.add_subcommand("evaluate", "Score reconstructions against ground truth");
  for (auto* s : {train, simulate, enrich, evaluate}) s->fallthrough();
  app.require_subcommand(1, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    validate_numbers(c);
    if (train->parsed()) return cmd_train(c);
    if (simulate->parsed()) return cmd_simulate(c);
    if (enrich->parsed()) return cmd_enrich(c);
    return cmd_evaluate(c);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
