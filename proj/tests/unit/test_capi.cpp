#include <doctest.h>

#include <string>
#include <vector>

#include <track_enrich/track_enrich.h>

#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using trackenrich::testing::read_file;
using trackenrich::testing::TempDir;
using trackenrich::testing::write_file;

namespace {

struct MatchFiles {
  TempDir dir{"capi"};
  std::string home, away, events;
  MatchFiles() {
    trackenrich::synth::Options o;
    o.duration_s = 240;
    const auto m = trackenrich::synth::make_match(o);
    home = (dir / "home.csv").string();
    away = (dir / "away.csv").string();
    events = (dir / "events.csv").string();
    trackenrich::synth::write_metrica(m, o, home, away, events);
  }
};

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(te_status_name(TE_OK)) == "ok");
  CHECK(std::string(te_status_name(TE_ERR_IO)) == "i/o error");
  CHECK(std::string(te_version()) == "1.0.0");
}

TEST_CASE("null arguments and missing files") {
  te_match* m = nullptr;
  CHECK(te_match_load(nullptr, "x", &m) == TE_ERR_INVALID_ARGUMENT);
  CHECK(te_match_load("x", "y", nullptr) == TE_ERR_INVALID_ARGUMENT);
  CHECK(te_match_load("/nonexistent/home.csv", "/nonexistent/away.csv", &m) == TE_ERR_IO);
  CHECK(m == nullptr);
  CHECK(std::string(te_last_error()).find("/nonexistent/home.csv") != std::string::npos);
  te_model* model = nullptr;
  CHECK(te_model_fit(nullptr, 0, nullptr, &model) == TE_ERR_INVALID_ARGUMENT);
  CHECK(te_model_summary(nullptr, nullptr, 0, nullptr) == TE_ERR_INVALID_ARGUMENT);
  // freeing null is a no-op
  te_match_free(nullptr);
  te_model_free(nullptr);
  te_report_free(nullptr);
}

TEST_CASE("malformed inputs map to their codes") {
  TempDir dir("capi_bad");
  write_file(dir / "model.json", "{\"format\": 3}");
  te_model* model = nullptr;
  CHECK(te_model_load((dir / "model.json").string().c_str(), &model) == TE_ERR_MALFORMED_INPUT);
  write_file(dir / "frames.json", "{}");
  write_file(dir / "events.json", "[]");
  te_broadcast360* b = nullptr;
  const te_360_options o = te_360_options_default();
  CHECK(te_broadcast360_load((dir / "frames.json").string().c_str(), (dir / "events.json").string().c_str(), &o, &b) ==
        TE_ERR_MALFORMED_INPUT);
  te_degrade_options d = te_degrade_options_default();
  d.sample_period = -1;
  MatchFiles files;
  te_match* m = nullptr;
  REQUIRE(te_match_load(files.home.c_str(), files.away.c_str(), &m) == TE_OK);
  te_record* r = nullptr;
  CHECK(te_simulate_broadcast(m, 0, &d, &r) == TE_ERR_INVALID_ARGUMENT);
  d = te_degrade_options_default();
  CHECK(te_simulate_broadcast(m, 5, &d, &r) == TE_ERR_INVALID_ARGUMENT);
  te_match_free(m);
}

TEST_CASE("full pipeline through the C interface") {
  MatchFiles files;
  te_match* m = nullptr;
  REQUIRE(te_match_load(files.home.c_str(), files.away.c_str(), &m) == TE_OK);
  REQUIRE(te_match_load_events(m, files.events.c_str()) == TE_OK);
  REQUIRE(te_match_half_count(m) == 2);
  CHECK(te_match_half_id(m, 1) == 2);
  CHECK(te_match_rows_dropped(m) == 0);

  const te_fit_options fo = te_fit_options_default();
  CHECK(fo.ar_order == 2);
  CHECK(fo.ma_order == 1);
  CHECK(fo.exog_order == 2);
  te_model* model = nullptr;
  const te_match* ms[] = {m};
  REQUIRE(te_model_fit(ms, 1, &fo, &model) == TE_OK);
  CHECK(te_model_resid_std(model) > 0.0);

  size_t needed = 0;
  REQUIRE(te_model_summary(model, nullptr, 0, &needed) == TE_OK);
  REQUIRE(needed > 1);
  std::string small(4, 'x');
  size_t needed2 = 0;
  CHECK(te_model_summary(model, small.data(), small.size(), &needed2) == TE_ERR_INVALID_ARGUMENT);
  CHECK(needed2 == needed);
  CHECK(small == "xxxx");
  std::string full(needed, '\0');
  REQUIRE(te_model_summary(model, full.data(), full.size(), nullptr) == TE_OK);
  CHECK(full.find("ARMAX") != std::string::npos);

  TempDir out("capi_out");
  te_degrade_options d = te_degrade_options_default();
  d.trim_frames = 10;
  std::vector<te_record*> records;
  std::vector<te_reconstruction*> recons;
  const te_enrich_options eo = te_enrich_options_default();
  CHECK(eo.alpha == 0.5);
  for (size_t h = 0; h < 2; ++h) {
    te_record* r = nullptr;
    REQUIRE(te_simulate_broadcast(m, h, &d, &r) == TE_OK);
    te_degrade_summary s{};
    REQUIRE(te_record_degrade_summary(m, h, r, &s) == TE_OK);
    CHECK(s.frames == te_record_frame_count(r));
    CHECK(s.mean_visible_outfielders > 0.0);
    const std::string rp = (out / ("record_" + std::to_string(h) + ".json")).string();
    REQUIRE(te_record_save(r, rp.c_str()) == TE_OK);
    te_record* back = nullptr;
    REQUIRE(te_record_load(rp.c_str(), &back) == TE_OK);
    CHECK(te_record_half_id(back) == te_record_half_id(r));
    te_record_free(r);

    te_reconstruction* rc = nullptr;
    REQUIRE(te_reconstruct(back, model, &eo, &rc) == TE_OK);
    const std::string tp = (out / ("traj_" + std::to_string(h) + ".json")).string();
    REQUIRE(te_reconstruction_save(rc, tp.c_str()) == TE_OK);
    REQUIRE(te_reconstruction_write_enriched(rc, model, back, 1.0, (out / "enriched.json").string().c_str()) == TE_OK);
    te_reconstruction* loaded = nullptr;
    REQUIRE(te_reconstruction_load(tp.c_str(), back, model, eo.alpha, &loaded) == TE_OK);
    CHECK(te_reconstruction_point_count(loaded) == te_reconstruction_point_count(rc));
    te_reconstruction_free(rc);
    records.push_back(back);
    recons.push_back(loaded);
  }
  // trajectories of half 2 do not belong to the record of half 1
  te_reconstruction* wrong = nullptr;
  CHECK(te_reconstruction_load((out / "traj_1.json").string().c_str(), records[0], model, 0.5, &wrong) ==
        TE_ERR_CONSISTENCY);

  const double pct[] = {25, 50, 75, 95};
  te_report* report = nullptr;
  REQUIRE(te_evaluate(m, records.data(), recons.data(), 2, model, pct, 4, &report) == TE_OK);
  te_report_summary s{};
  REQUIRE(te_report_summary_get(report, &s) == TE_OK);
  CHECK(s.frames > 0);
  CHECK(s.skipped_frames == 0);
  CHECK(s.example_frames == 4);
  CHECK(s.mean_all_in_phase <= s.mean_offcam_in_phase);
  const std::string rd = (out / "report").string();
  REQUIRE(te_report_write(report, rd.c_str()) == TE_OK);
  CHECK(read_file(out / "report" / "report.json").find("\"pooled\"") != std::string::npos);
  CHECK(read_file(out / "report" / "curve.csv").rfind("bucket_s", 0) == 0);
  CHECK(read_file(out / "report" / "percentile_50.svg").find("<svg") == 0);

  te_report_free(report);
  for (auto* r : recons) te_reconstruction_free(r);
  for (auto* r : records) te_record_free(r);
  te_model_free(model);
  te_match_free(m);
}
