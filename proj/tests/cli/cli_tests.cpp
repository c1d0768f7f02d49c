#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

namespace fs = std::filesystem;
using trackenrich::testing::read_file;
using trackenrich::testing::TempDir;
using trackenrich::testing::write_file;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string("TRACK_ENRICH_LOG=quiet '") + TRACK_ENRICH_CLI + "' " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

// Two synthetic matches on disk: one to train on, one to evaluate.
struct Fixture {
  TempDir dir{"cli"};
  fs::path train_home, train_away, home, away, events;
  Fixture() {
    trackenrich::synth::Options o;
    o.duration_s = 300;
    o.seed = 3;
    const auto train = trackenrich::synth::make_match(o);
    train_home = dir / "train_home.csv";
    train_away = dir / "train_away.csv";
    trackenrich::synth::write_metrica(train, o, train_home, train_away);
    o.seed = 4;
    const auto test = trackenrich::synth::make_match(o);
    home = dir / "home.csv";
    away = dir / "away.csv";
    events = dir / "events.csv";
    trackenrich::synth::write_metrica(test, o, home, away, events);
  }
  std::string truth_args() const {
    return "--tracking-home " + q(home) + " --tracking-away " + q(away) + " --events " + q(events);
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void full_flow(const fs::path& out, const Fixture& f) {
  const std::string common = "--out-dir " + q(out) + " --model " + q(out / "model.json");
  Run r = run_cli("train --train-home " + q(f.train_home) + " --train-away " + q(f.train_away) + " " + common);
  INFO(r.output);
  REQUIRE(r.code == 0);
  CHECK(r.output.find("ARMAX") != std::string::npos);
  r = run_cli("simulate-broadcast " + f.truth_args() + " --trim-frames 10 " + common);
  INFO(r.output);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out / "record_h1.json"));
  CHECK(fs::exists(out / "record_h2.json"));
  r = run_cli("enrich " + common);
  INFO(r.output);
  REQUIRE(r.code == 0);
  CHECK(r.output.find("throughput:") != std::string::npos);
  r = run_cli("evaluate " + f.truth_args() + " " + common);
  INFO(r.output);
  REQUIRE(r.code == 0);
  CHECK(r.output.find("error summary") != std::string::npos);
}

}  // namespace

TEST_CASE("missing input is a usage error naming the path") {
  TempDir dir("cli_missing");
  const Run r = run_cli("train --train-home /no/such/home.csv --train-away /no/such/away.csv --model " +
                        q(dir / "m.json"));
  CHECK(r.code == 2);
  CHECK(r.output.find("/no/such/home.csv") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "m.json"));

  const Run none = run_cli("enrich --out-dir " + q(dir.path()) + " --model " + q(dir / "m.json"));
  CHECK(none.code == 2);
  const Run bad = run_cli("simulate-broadcast --sample-period abc");
  CHECK(bad.code == 2);
  const Run nosub = run_cli("");
  CHECK(nosub.code == 2);
}

TEST_CASE("train, simulate, enrich and evaluate") {
  const Fixture& f = fixture();
  TempDir a("cli_a"), b("cli_b");
  full_flow(a.path(), f);
  full_flow(b.path(), f);

  const auto enriched = nlohmann::json::parse(read_file(a / "enriched_h1.json"));
  const auto& frames = enriched;
  REQUIRE(frames.size() > 100);
  for (const auto& fr : frames) CHECK(fr.at("players").size() == 22);

  const auto report = nlohmann::json::parse(read_file(a / "report" / "report.json"));
  CHECK(report.at("pooled").at("counts").at("frames").get<int>() > 0);
  CHECK(fs::exists(a / "report" / "curve.csv"));
  CHECK(fs::exists(a / "report" / "report.txt"));
  for (const char* p : {"25", "50", "75", "95"}) CHECK(fs::exists(a / "report" / ("percentile_" + std::string(p) + ".svg")));

  // reruns are byte-identical
  for (const char* name : {"model.json", "record_h1.json", "record_h2.json", "enriched_h2.json", "trajectories_h1.json",
                           "report/report.json", "report/curve.csv", "report/percentile_95.svg"}) {
    INFO(name);
    CHECK(read_file(a / name) == read_file(b / name));
  }
}

TEST_CASE("config file with a flag override") {
  const Fixture& f = fixture();
  TempDir dir("cli_cfg");
  write_file(dir / "run.cfg", "tracking-home = " + f.home.string() + "\ntracking-away = " + f.away.string() +
                                  "\nout-dir = " + dir.path().string() + "\nsample-period = 2.5\ntrim-frames = 4\n");
  Run r = run_cli("simulate-broadcast --config " + q(dir / "run.cfg"));
  INFO(r.output);
  REQUIRE(r.code == 0);
  const auto slow = nlohmann::json::parse(read_file(dir / "record_h1.json")).at("frames");
  CHECK(slow.at(1).at("time_s").get<double>() - slow.at(0).at("time_s").get<double>() == doctest::Approx(2.5));

  r = run_cli("simulate-broadcast --config " + q(dir / "run.cfg") + " --sample-period 1");
  REQUIRE(r.code == 0);
  const auto fast = nlohmann::json::parse(read_file(dir / "record_h1.json")).at("frames");
  CHECK(fast.at(1).at("time_s").get<double>() - fast.at(0).at("time_s").get<double>() == doctest::Approx(1.0));
  CHECK(fast.size() > 2 * slow.size());
}

TEST_CASE("360 input with an orphan frame") {
  const Fixture& f = fixture();
  TempDir dir("cli_360");
  REQUIRE(run_cli("train --train-home " + q(f.train_home) + " --train-away " + q(f.train_away) + " --model " +
                  q(dir / "model.json"))
              .code == 0);
  std::string events = "[", frames = "[";
  for (int i = 0; i < 12; ++i) {
    const std::string id = "ev" + std::to_string(i);
    const std::string x = std::to_string(40 + 3 * i), y = std::to_string(30 + i);
    const std::string ts = "00:00:" + std::string(i < 5 ? "0" : "") + std::to_string(2 * i) + ".000";
    if (i) events += ",", frames += ",";
    events += R"({"id": ")" + id + R"(", "timestamp": ")" + ts + R"(", "period": 1, "team": {"name": "Reds"}, "location": [)" +
              x + ", " + y + "]}";
    frames += R"({"event_uuid": ")" + id + R"(", "freeze_frame": [{"location": [)" + x + ", " + y +
              R"(], "teammate": true, "actor": true}, {"location": [)" + std::to_string(20 + 2 * i) +
              R"(, 20], "teammate": true}, {"location": [)" + std::to_string(70 - i) + R"(, 50], "teammate": false}]})";
  }
  frames += R"(, {"event_uuid": "ghost", "freeze_frame": [{"location": [10, 10], "teammate": true, "actor": true}]}])";
  events += "]";
  write_file(dir / "events.json", events);
  write_file(dir / "frames.json", frames);
  const Run r = run_cli("enrich --frames-360 " + q(dir / "frames.json") + " --events-360 " + q(dir / "events.json") +
                        " --out-dir " + q(dir.path()) + " --model " + q(dir / "model.json"));
  INFO(r.output);
  REQUIRE(r.code == 0);
  const auto errors = nlohmann::json::parse(read_file(dir / "errors.json"));
  const auto& list = errors.is_array() ? errors : errors.at("errors");
  REQUIRE(list.size() == 1);
  CHECK(list[0].dump().find("orphan frame") != std::string::npos);
  const auto enriched = nlohmann::json::parse(read_file(dir / "enriched_h1.json"));
  for (const auto& fr : enriched) CHECK(fr.at("players").size() == 22);
}
