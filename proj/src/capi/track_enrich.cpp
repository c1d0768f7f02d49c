#include "track_enrich/track_enrich.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "core/assigner.hpp"
#include "core/broadcast_sim.hpp"
#include "core/evaluator.hpp"
#include "core/forecaster.hpp"
#include "core/ingest.hpp"
#include "core/interpolator.hpp"
#include "core/pipeline.hpp"

namespace te = trackenrich;

struct te_match {
  te::TrackingData data;
};

struct te_model {
  te::ForecastModel model;
};

struct te_record {
  te::DiscreteMatchRecord record;
};

struct te_broadcast360 {
  te::Read360Result result;
};

struct te_reconstruction {
  te::HalfReconstruction recon;
  double alpha = 0.0;
};

struct te_report {
  te::ErrorReport report;
  std::size_t skipped = 0;
  // example frames from the first half
  std::vector<te::SelectedFrame> selected;
  std::vector<te::EnrichedFrame> example_frames;
  std::vector<std::vector<std::optional<int>>> example_annotations;
};

namespace {

thread_local std::string g_last_error;

te_status fail(te_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs fn, mapping exceptions onto status codes.
template <typename F>
te_status guard(F&& fn) {
  g_last_error.clear();
  try {
    fn();
    return TE_OK;
  } catch (const te::MalformedInput& e) {
    return fail(TE_ERR_MALFORMED_INPUT, e.what());
  } catch (const te::IoError& e) {
    return fail(TE_ERR_IO, e.what());
  } catch (const te::FitError& e) {
    return fail(TE_ERR_FIT, e.what());
  } catch (const te::ConsistencyError& e) {
    return fail(TE_ERR_CONSISTENCY, e.what());
  } catch (const std::logic_error& e) {
    // PreconditionError, invalid_argument, out_of_range
    return fail(TE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TE_ERR_INTERNAL, "unknown error");
  }
}

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

te_status copy_text(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf || cap < text.size() + 1) {
    if (!needed) return fail(TE_ERR_INVALID_ARGUMENT, "buffer too small and no size pointer given");
    return buf ? fail(TE_ERR_INVALID_ARGUMENT, "buffer too small") : TE_OK;
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return TE_OK;
}

const te::MatchHalf* find_half(const te_match* match, int half_id) {
  for (const auto& h : match->data.halves) {
    if (h.half_id == half_id) return &h;
  }
  return nullptr;
}

double record_period(const te::DiscreteMatchRecord& rec) {
  if (rec.frames.size() < 2) return 1.0;
  const double p = (rec.frames.back().time - rec.frames.front().time) / static_cast<double>(rec.frames.size() - 1);
  return p > 0.0 ? p : 1.0;
}

}  // namespace

extern "C" {

const char* te_last_error(void) { return g_last_error.c_str(); }

const char* te_version(void) { return "1.0.0"; }

const char* te_status_name(te_status status) {
  switch (status) {
    case TE_OK: return "ok";
    case TE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TE_ERR_IO: return "i/o error";
    case TE_ERR_MALFORMED_INPUT: return "malformed input";
    case TE_ERR_FIT: return "fit failed";
    case TE_ERR_CONSISTENCY: return "consistency error";
    case TE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// ---- ground truth

te_status te_match_load(const char* home_csv, const char* away_csv, te_match** out) {
  return guard([&] {
    require(home_csv && away_csv && out, "te_match_load: null argument");
    *out = nullptr;
    auto m = std::make_unique<te_match>();
    m->data = te::read_tracking_csv(home_csv, away_csv);
    *out = m.release();
  });
}

te_status te_match_load_events(te_match* match, const char* events_csv) {
  return guard([&] {
    require(match && events_csv, "te_match_load_events: null argument");
    te::read_events_csv(events_csv, match->data.halves);
  });
}

size_t te_match_half_count(const te_match* match) { return match ? match->data.halves.size() : 0; }

int te_match_half_id(const te_match* match, size_t half_index) {
  if (!match || half_index >= match->data.halves.size()) return -1;
  return match->data.halves[half_index].half_id;
}

size_t te_match_rows_dropped(const te_match* match) { return match ? match->data.rows_dropped : 0; }

size_t te_match_warning_count(const te_match* match) { return match ? match->data.warnings.size() : 0; }

const char* te_match_warning(const te_match* match, size_t i) {
  if (!match || i >= match->data.warnings.size()) return nullptr;
  return match->data.warnings[i].c_str();
}

void te_match_free(te_match* match) { delete match; }

// ---- model

te_fit_options te_fit_options_default(void) {
  const te::FitOptions d;
  return {d.orders.p, d.orders.q, d.orders.r, d.grid_step};
}

te_status te_model_fit(const te_match* const* matches, size_t n_matches, const te_fit_options* options,
                       te_model** out) {
  return guard([&] {
    require(out, "te_model_fit: null output");
    *out = nullptr;
    require(matches && n_matches > 0, "te_model_fit: no matches given");
    const te_fit_options o = options ? *options : te_fit_options_default();
    require(o.ar_order >= 0 && o.ma_order >= 0 && o.exog_order >= 0, "model orders must be non-negative");
    require(o.grid_step > 0.0 && std::isfinite(o.grid_step), "grid step must be positive");
    std::vector<te::MatchHalf> halves;
    for (size_t i = 0; i < n_matches; ++i) {
      require(matches[i] != nullptr, "te_model_fit: null match");
      halves.insert(halves.end(), matches[i]->data.halves.begin(), matches[i]->data.halves.end());
    }
    te::FitOptions fo;
    fo.orders = {o.ar_order, o.ma_order, o.exog_order};
    fo.grid_step = o.grid_step;
    auto m = std::make_unique<te_model>();
    m->model = te::fit(te::training_set_from_halves(halves, o.grid_step), fo);
    *out = m.release();
  });
}

te_status te_model_load(const char* path, te_model** out) {
  return guard([&] {
    require(path && out, "te_model_load: null argument");
    *out = nullptr;
    auto m = std::make_unique<te_model>();
    m->model = te::load_model(path);
    *out = m.release();
  });
}

te_status te_model_save(const te_model* model, const char* path) {
  return guard([&] {
    require(model && path, "te_model_save: null argument");
    te::save_model(model->model, path);
  });
}

te_status te_model_summary(const te_model* model, char* buf, size_t cap, size_t* needed) {
  std::string text;
  const te_status s = guard([&] {
    require(model, "te_model_summary: null model");
    text = te::model_summary(model->model);
  });
  if (s != TE_OK) return s;
  return copy_text(text, buf, cap, needed);
}

double te_model_resid_std(const te_model* model) { return model ? model->model.resid_std : NAN; }

double te_model_one_step_std(const te_model* model) { return model ? model->model.one_step_std : NAN; }

void te_model_free(te_model* model) { delete model; }

// ---- records

te_degrade_options te_degrade_options_default(void) {
  const te::DegradeConfig d;
  return {d.sample_period, d.visibility_radius, d.trim_frames};
}

te_status te_simulate_broadcast(const te_match* match, size_t half_index, const te_degrade_options* options,
                                te_record** out) {
  return guard([&] {
    require(match && out, "te_simulate_broadcast: null argument");
    *out = nullptr;
    require(half_index < match->data.halves.size(), "half index out of range");
    const te_degrade_options o = options ? *options : te_degrade_options_default();
    te::DegradeConfig cfg{o.sample_period, o.visibility_radius, o.trim_frames};
    cfg.validate();
    auto r = std::make_unique<te_record>();
    r->record = te::degrade(match->data.halves[half_index], cfg);
    *out = r.release();
  });
}

te_status te_record_degrade_summary(const te_match* match, size_t half_index, const te_record* record,
                                    te_degrade_summary* out) {
  return guard([&] {
    require(match && record && out, "te_record_degrade_summary: null argument");
    require(half_index < match->data.halves.size(), "half index out of range");
    const auto s = te::degrade_stats(match->data.halves[half_index], record->record);
    *out = {s.frames, s.visible_outfielders, s.hidden_outfielders, s.mean_visible_outfielders()};
  });
}

te_status te_record_load(const char* path, te_record** out) {
  return guard([&] {
    require(path && out, "te_record_load: null argument");
    *out = nullptr;
    auto r = std::make_unique<te_record>();
    r->record = te::read_discrete(path);
    *out = r.release();
  });
}

te_status te_record_save(const te_record* record, const char* path) {
  return guard([&] {
    require(record && path, "te_record_save: null argument");
    te::write_discrete(record->record, path);
  });
}

size_t te_record_frame_count(const te_record* record) { return record ? record->record.frames.size() : 0; }

int te_record_half_id(const te_record* record) { return record ? record->record.half_id : -1; }

void te_record_free(te_record* record) { delete record; }

te_360_options te_360_options_default(void) {
  const te::Read360Options d;
  return {d.axis_threshold, nullptr};
}

te_status te_broadcast360_load(const char* frames_json, const char* events_json, const te_360_options* options,
                               te_broadcast360** out) {
  return guard([&] {
    require(frames_json && events_json && out, "te_broadcast360_load: null argument");
    *out = nullptr;
    const te_360_options o = options ? *options : te_360_options_default();
    require(o.axis_threshold > 0.0 && std::isfinite(o.axis_threshold), "axis threshold must be positive");
    te::Read360Options ro;
    ro.axis_threshold = o.axis_threshold;
    if (o.home_team) ro.home_team = std::string(o.home_team);
    auto b = std::make_unique<te_broadcast360>();
    b->result = te::read_360_frames(frames_json, events_json, ro);
    *out = b.release();
  });
}

size_t te_broadcast360_half_count(const te_broadcast360* data) { return data ? data->result.halves.size() : 0; }

te_status te_broadcast360_record(const te_broadcast360* data, size_t i, te_record** out) {
  return guard([&] {
    require(data && out, "te_broadcast360_record: null argument");
    *out = nullptr;
    require(i < data->result.halves.size(), "half index out of range");
    auto r = std::make_unique<te_record>();
    r->record = data->result.halves[i];
    *out = r.release();
  });
}

size_t te_broadcast360_error_count(const te_broadcast360* data) { return data ? data->result.errors.size() : 0; }

te_status te_broadcast360_write_errors(const te_broadcast360* data, const char* path) {
  return guard([&] {
    require(data && path, "te_broadcast360_write_errors: null argument");
    te::write_axis_errors(data->result.errors, path);
  });
}

void te_broadcast360_free(te_broadcast360* data) { delete data; }

// ---- reconstruction

te_enrich_options te_enrich_options_default(void) {
  const te::AssignerConfig d;
  return {0.5, d.log_density_floor};
}

te_status te_reconstruct(const te_record* record, const te_model* model, const te_enrich_options* options,
                         te_reconstruction** out) {
  return guard([&] {
    require(record && model && out, "te_reconstruct: null argument");
    *out = nullptr;
    const te_enrich_options o = options ? *options : te_enrich_options_default();
    require(o.alpha >= 0.0 && o.alpha <= 1.0, "alpha must lie in [0, 1]");
    require(std::isfinite(o.log_density_floor), "log density floor must be finite");
    te::AssignerConfig cfg;
    cfg.log_density_floor = o.log_density_floor;
    auto r = std::make_unique<te_reconstruction>();
    r->recon = te::reconstruct(record->record, model->model, o.alpha, cfg);
    r->alpha = o.alpha;
    *out = r.release();
  });
}

te_status te_reconstruction_write_enriched(const te_reconstruction* recon, const te_model* model,
                                           const te_record* record, double step, const char* path) {
  return guard([&] {
    require(recon && model && record && path, "te_reconstruction_write_enriched: null argument");
    require(step > 0.0 && std::isfinite(step), "output step must be positive");
    te::write_enriched(te::enriched_frames(recon->recon, model->model, record->record, step), path);
  });
}

te_status te_reconstruction_save(const te_reconstruction* recon, const char* trajectories_path) {
  return guard([&] {
    require(recon && trajectories_path, "te_reconstruction_save: null argument");
    te::write_trajectories(recon->recon.set.all(), recon->recon.set.half_id, trajectories_path);
  });
}

te_status te_reconstruction_load(const char* trajectories_path, const te_record* record, const te_model* model,
                                 double alpha, te_reconstruction** out) {
  return guard([&] {
    require(trajectories_path && record && model && out, "te_reconstruction_load: null argument");
    *out = nullptr;
    require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
    int half_id = 0;
    auto trajectories = te::read_trajectories(trajectories_path, &half_id);
    if (half_id != record->record.half_id) {
      throw te::ConsistencyError("trajectories are for half " + std::to_string(half_id) + " but the record is half " +
                                 std::to_string(record->record.half_id));
    }
    const double step = model->model.grid_step;
    auto r = std::make_unique<te_reconstruction>();
    r->recon.set = te::trajectory_set_from(std::move(trajectories), half_id, record->record.home_attacks_positive_x,
                                           te::ball_grid(record->record, step));
    r->recon.field = te::compute_velocity_field(r->recon.set.all_outfield(), alpha, step);
    r->alpha = alpha;
    *out = r.release();
  });
}

size_t te_reconstruction_point_count(const te_reconstruction* recon) {
  if (!recon) return 0;
  size_t n = 0;
  for (const auto& t : recon->recon.set.all()) n += t.size();
  return n;
}

void te_reconstruction_free(te_reconstruction* recon) { delete recon; }

// ---- evaluation

te_status te_evaluate(const te_match* truth, const te_record* const* records, const te_reconstruction* const* recons,
                      size_t n, const te_model* model, const double* percentiles, size_t n_percentiles,
                      te_report** out) {
  return guard([&] {
    require(truth && records && recons && model && out, "te_evaluate: null argument");
    *out = nullptr;
    require(n > 0, "te_evaluate: nothing to evaluate");
    require(percentiles || n_percentiles == 0, "te_evaluate: null percentile list");
    for (size_t i = 0; i < n_percentiles; ++i) {
      require(percentiles[i] >= 0.0 && percentiles[i] <= 100.0, "percentiles must lie in [0, 100]");
    }
    std::vector<te::HalfEvaluation> halves;
    for (size_t i = 0; i < n; ++i) {
      require(records[i] && recons[i], "te_evaluate: null record or reconstruction");
      const auto& rec = records[i]->record;
      const te::MatchHalf* half = find_half(truth, rec.half_id);
      if (!half) throw te::ConsistencyError("ground truth has no half " + std::to_string(rec.half_id));
      if (recons[i]->recon.set.half_id != rec.half_id) {
        throw te::ConsistencyError("reconstruction and record disagree on the half id");
      }
      halves.push_back(te::evaluate_half(rec, recons[i]->recon, model->model, *half));
    }
    auto r = std::make_unique<te_report>();
    r->report = te::build_report(halves);
    for (const auto& h : halves) r->skipped += h.skipped_frames;

    const auto& first = halves.front();
    if (n_percentiles > 0 && first.in_phase.size() >= 100) {
      r->selected = te::percentile_frames(first.in_phase, {percentiles, percentiles + n_percentiles});
      const double period = record_period(records[0]->record);
      for (const auto& sel : r->selected) {
        std::vector<double> occ;
        auto frame = te::enrich_at(recons[0]->recon, model->model, first.in_phase[sel.index].time, &occ);
        std::vector<std::optional<int>> notes(frame.players.size());
        for (size_t p = 0; p < frame.players.size(); ++p) {
          if (frame.players[p].provenance == te::Provenance::Estimated && std::isfinite(occ[p])) {
            notes[p] = static_cast<int>(std::lround(occ[p] / period));
          }
        }
        r->example_frames.push_back(std::move(frame));
        r->example_annotations.push_back(std::move(notes));
      }
    }
    *out = r.release();
  });
}

te_status te_report_summary_get(const te_report* report, te_report_summary* out) {
  return guard([&] {
    require(report && out, "te_report_summary_get: null argument");
    const auto& s = report->report.pooled;
    *out = {s.mean_all_in_phase,       s.mean_offcam_in_phase,     s.median_offcam_in_phase,
            s.mean_all_out_of_phase,   s.mean_prev_frame_observed, s.mean_offcam_event_frames,
            s.frames,                  s.predictions,              report->skipped,
            report->selected.size()};
  });
}

te_status te_report_table(const te_report* report, char* buf, size_t cap, size_t* needed) {
  std::string text;
  const te_status s = guard([&] {
    require(report, "te_report_table: null report");
    text = te::report_table(report->report);
  });
  if (s != TE_OK) return s;
  return copy_text(text, buf, cap, needed);
}

te_status te_report_write(const te_report* report, const char* out_dir) {
  return guard([&] {
    require(report && out_dir, "te_report_write: null argument");
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw te::IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    te::write_report_json(report->report, dir / "report.json");
    {
      const std::string table = te::report_table(report->report);
      std::FILE* f = std::fopen((dir / "report.txt").string().c_str(), "wb");
      if (!f) throw te::IoError("cannot write output file " + (dir / "report.txt").string());
      const bool ok = std::fwrite(table.data(), 1, table.size(), f) == table.size();
      if (std::fclose(f) != 0 || !ok) throw te::IoError("I/O error writing " + (dir / "report.txt").string());
    }
    te::write_curve_csv(report->report.pooled.curve, dir / "curve.csv");
    for (size_t i = 0; i < report->selected.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "percentile_%02d.svg", static_cast<int>(std::lround(report->selected[i].percentile)));
      te::write_pitch_svg(report->example_frames[i], report->example_annotations[i], dir / name);
    }
  });
}

void te_report_free(te_report* report) { delete report; }

}  // extern "C"
