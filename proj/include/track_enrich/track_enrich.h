/*
 * track_enrich.h: C interface to the tracking reconstruction library.
 *
 * Every object is an opaque handle released with its matching *_free
 * function. Functions return a te_status; on failure te_last_error() holds a
 * message for the calling thread until its next library call.
 *
 * Functions that produce text copy it into a caller buffer. *needed always
 * receives the required size including the terminator; buf=NULL only
 * queries it, and a too-small buffer is left untouched and reported as
 * TE_ERR_INVALID_ARGUMENT.
 */
#ifndef TRACK_ENRICH_H
#define TRACK_ENRICH_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(TE_BUILDING_LIBRARY)
#    define TE_API __declspec(dllexport)
#  else
#    define TE_API __declspec(dllimport)
#  endif
#else
#  define TE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum te_status {
  TE_OK = 0,
  TE_ERR_INVALID_ARGUMENT = 1, /* null handle, bad option value, broken precondition */
  TE_ERR_IO = 2,               /* file missing, unreadable or unwritable */
  TE_ERR_MALFORMED_INPUT = 3,  /* input file violates its format */
  TE_ERR_FIT = 4,              /* model fitting failed */
  TE_ERR_CONSISTENCY = 5,      /* estimates and ground truth disagree in shape */
  TE_ERR_INTERNAL = 6
} te_status;

TE_API const char* te_last_error(void);
TE_API const char* te_version(void);
TE_API const char* te_status_name(te_status status);

typedef struct te_match te_match;
typedef struct te_model te_model;
typedef struct te_record te_record;
typedef struct te_broadcast360 te_broadcast360;
typedef struct te_reconstruction te_reconstruction;
typedef struct te_report te_report;

/* ---- ground truth ------------------------------------------------------ */

/* Wide per-team tracking CSVs in percentage coordinates. */
TE_API te_status te_match_load(const char* home_csv, const char* away_csv, te_match** out);
/* Optional event CSV used for the event-frame statistics. */
TE_API te_status te_match_load_events(te_match* match, const char* events_csv);
TE_API size_t te_match_half_count(const te_match* match);
TE_API int te_match_half_id(const te_match* match, size_t half_index);
TE_API size_t te_match_rows_dropped(const te_match* match);
TE_API size_t te_match_warning_count(const te_match* match);
TE_API const char* te_match_warning(const te_match* match, size_t i);
TE_API void te_match_free(te_match* match);

/* ---- forecasting model -------------------------------------------------- */

typedef struct te_fit_options {
  int ar_order;    /* p */
  int ma_order;    /* q */
  int exog_order;  /* r, ball displacement lags 0..r-1 */
  double grid_step;
} te_fit_options;

TE_API te_fit_options te_fit_options_default(void);
/* Fits one pooled model on the outfield players of every half of every match. */
TE_API te_status te_model_fit(const te_match* const* matches, size_t n_matches, const te_fit_options* options,
                              te_model** out);
TE_API te_status te_model_load(const char* path, te_model** out);
TE_API te_status te_model_save(const te_model* model, const char* path);
TE_API te_status te_model_summary(const te_model* model, char* buf, size_t cap, size_t* needed);
TE_API double te_model_resid_std(const te_model* model);
TE_API double te_model_one_step_std(const te_model* model);
TE_API void te_model_free(te_model* model);

/* ---- discrete (broadcast-like) records ------------------------------------ */

typedef struct te_degrade_options {
  double sample_period;
  double visibility_radius;
  int trim_frames;
} te_degrade_options;

typedef struct te_degrade_summary {
  size_t frames;
  size_t visible_outfielders;
  size_t hidden_outfielders;
  double mean_visible_outfielders;
} te_degrade_summary;

TE_API te_degrade_options te_degrade_options_default(void);
TE_API te_status te_simulate_broadcast(const te_match* match, size_t half_index, const te_degrade_options* options,
                                       te_record** out);
TE_API te_status te_record_degrade_summary(const te_match* match, size_t half_index, const te_record* record,
                                           te_degrade_summary* out);
TE_API te_status te_record_load(const char* path, te_record** out);
TE_API te_status te_record_save(const te_record* record, const char* path);
TE_API size_t te_record_frame_count(const te_record* record);
TE_API int te_record_half_id(const te_record* record);
TE_API void te_record_free(te_record* record);

typedef struct te_360_options {
  double axis_threshold; /* metres of ball disagreement tolerated */
  const char* home_team; /* NULL: team of the first event */
} te_360_options;

TE_API te_360_options te_360_options_default(void);
TE_API te_status te_broadcast360_load(const char* frames_json, const char* events_json, const te_360_options* options,
                                      te_broadcast360** out);
TE_API size_t te_broadcast360_half_count(const te_broadcast360* data);
/* Copies half i out as an independent record. */
TE_API te_status te_broadcast360_record(const te_broadcast360* data, size_t i, te_record** out);
TE_API size_t te_broadcast360_error_count(const te_broadcast360* data);
TE_API te_status te_broadcast360_write_errors(const te_broadcast360* data, const char* path);
TE_API void te_broadcast360_free(te_broadcast360* data);

/* ---- reconstruction ---------------------------------------------------- */

typedef struct te_enrich_options {
  double alpha;             /* weight of the crowd velocity correction, [0, 1] */
  double log_density_floor; /* lower bound on assignment log-likelihoods */
} te_enrich_options;

TE_API te_enrich_options te_enrich_options_default(void);
TE_API te_status te_reconstruct(const te_record* record, const te_model* model, const te_enrich_options* options,
                                te_reconstruction** out);
/* Enriched frames (22 players, visibility flags) every `step` seconds. */
TE_API te_status te_reconstruction_write_enriched(const te_reconstruction* recon, const te_model* model,
                                                  const te_record* record, double step, const char* path);
TE_API te_status te_reconstruction_save(const te_reconstruction* recon, const char* trajectories_path);
/* Rebuilds a reconstruction from saved trajectories and the record they came from. */
TE_API te_status te_reconstruction_load(const char* trajectories_path, const te_record* record, const te_model* model,
                                        double alpha, te_reconstruction** out);
TE_API size_t te_reconstruction_point_count(const te_reconstruction* recon);
TE_API void te_reconstruction_free(te_reconstruction* recon);

/* ---- evaluation -------------------------------------------------------- */

typedef struct te_report_summary {
  double mean_all_in_phase;
  double mean_offcam_in_phase;
  double median_offcam_in_phase;
  double mean_all_out_of_phase;
  double mean_prev_frame_observed;
  double mean_offcam_event_frames;
  size_t frames;
  size_t predictions;
  size_t skipped_frames;
  size_t example_frames; /* percentile frames selected (0 when the half is too short) */
} te_report_summary;

/* Scores reconstructions against the match halves with the same half id.
 * `percentiles` selects example frames from the first half (may be NULL). */
TE_API te_status te_evaluate(const te_match* truth, const te_record* const* records,
                             const te_reconstruction* const* recons, size_t n, const te_model* model,
                             const double* percentiles, size_t n_percentiles, te_report** out);
TE_API te_status te_report_summary_get(const te_report* report, te_report_summary* out);
TE_API te_status te_report_table(const te_report* report, char* buf, size_t cap, size_t* needed);
/* report.json, report.txt, curve.csv and percentile_XX.svg under out_dir. */
TE_API te_status te_report_write(const te_report* report, const char* out_dir);
TE_API void te_report_free(te_report* report);

#ifdef __cplusplus
}
#endif

#endif /* TRACK_ENRICH_H */
