#include "core/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "core/json_out.hpp"

namespace trackenrich {
namespace {

using nlohmann::json;

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      auto cell = line.substr(start);
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == '\n')) cell.remove_suffix(1);
      cells.push_back(cell);
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// NaN for empty / NaN cells; throws on garbage.
double parse_cell(std::string_view cell, const std::string& where) {
  cell = trim(cell);
  if (cell.empty() || cell == "NaN" || cell == "nan" || cell == "NA") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw MalformedInput("unparseable number '" + std::string(cell) + "' in " + where);
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file " + path.string());
  return in;
}

struct TeamRow {
  int period = 0;
  long frame = 0;
  double time = 0.0;
  std::optional<PitchPoint> ball;
  std::vector<std::optional<PitchPoint>> players;
};

struct TeamFile {
  std::vector<std::string> player_names;
  std::vector<TeamRow> rows;
  std::vector<bool> has_data;
};

TeamFile read_team_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  const std::string label = path.filename().string();
  std::string line;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    auto cells = split_csv(line);
    if (!cells.empty() && trim(cells[0]) == "Period") {
      header_line = line;
      break;
    }
  }
  header = split_csv(header_line);
  if (header.size() < 5 || trim(header[1]) != "Frame" || trim(header[2]).substr(0, 4) != "Time") {
    throw MalformedInput("unparseable tracking header in " + label);
  }

  TeamFile file;
  std::vector<std::size_t> player_cols;
  std::optional<std::size_t> ball_col;
  for (std::size_t c = 3; c < header.size(); ++c) {
    const auto name = trim(header[c]);
    if (name.empty()) continue;
    if (c + 1 >= header.size()) throw MalformedInput("column '" + std::string(name) + "' lacks a y column in " + label);
    if (name == "Ball") {
      ball_col = c;
    } else {
      player_cols.push_back(c);
      file.player_names.emplace_back(name);
    }
    ++c;
  }
  file.has_data.assign(player_cols.size(), false);

  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    const std::string where = label + " data row " + std::to_string(line_no);
    if (cells.size() < 3) throw MalformedInput("short row in " + where);
    TeamRow row;
    row.period = static_cast<int>(parse_cell(cells[0], where));
    row.frame = static_cast<long>(parse_cell(cells[1], where));
    row.time = parse_cell(cells[2], where);
    if (!std::isfinite(row.time)) throw MalformedInput("missing time in " + where);
    auto pair_at = [&](std::size_t c) -> std::optional<PitchPoint> {
      if (c + 1 >= cells.size()) return std::nullopt;
      const double x = parse_cell(cells[c], where);
      const double y = parse_cell(cells[c + 1], where);
      if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
      return scale_percent_coords({x, y}, where);
    };
    if (ball_col) row.ball = pair_at(*ball_col);
    row.players.reserve(player_cols.size());
    for (std::size_t i = 0; i < player_cols.size(); ++i) {
      row.players.push_back(pair_at(player_cols[i]));
      if (row.players.back()) file.has_data[i] = true;
    }
    file.rows.push_back(std::move(row));
  }
  return file;
}

void assign_keepers(MatchHalf& half) {
  if (half.frames.empty()) return;
  const auto& first = half.frames.front();
  for (Team team : {Team::Home, Team::Away}) {
    double best = std::numeric_limits<double>::infinity();
    int id = -1;
    for (const auto& p : first.players) {
      if (p.tag.team != team) continue;
      const double d = std::min(p.pos.x, kPitchLength - p.pos.x);
      if (d < best) { best = d; id = p.id; }
    }
    half.goalkeeper_id[static_cast<std::size_t>(team)] = id;
  }
  const int home_gk = half.goalkeeper_id[0];
  const int away_gk = half.goalkeeper_id[1];
  for (const auto& p : first.players) {
    if (p.id == home_gk) half.home_attacks_positive_x = p.pos.x < kPitchLength / 2;
    else if (home_gk < 0 && p.id == away_gk) half.home_attacks_positive_x = p.pos.x > kPitchLength / 2;
  }
  for (auto& f : half.frames) {
    for (auto& p : f.players) p.tag.is_goalkeeper = p.id == half.goalkeeper_id[static_cast<std::size_t>(p.tag.team)];
  }
}

double parse_timestamp(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw MalformedInput("event timestamp is neither string nor number");
  const auto s = j.get<std::string>();
  int h = 0, m = 0;
  double sec = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> h >> c1 >> m >> c2 >> sec) || c1 != ':' || c2 != ':') {
    throw MalformedInput("unparseable timestamp '" + s + "'");
  }
  return h * 3600.0 + m * 60.0 + sec;
}

std::string team_label(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object() && j.contains("name")) return j.at("name").get<std::string>();
  if (j.is_object() && j.contains("id")) return j.at("id").dump();
  throw MalformedInput("event team has no usable name");
}

std::optional<PitchPoint> location_of(const json& obj) {
  if (!obj.contains("location") || !obj.at("location").is_array() || obj.at("location").size() < 2) return std::nullopt;
  const auto& loc = obj.at("location");
  return PitchPoint{loc[0].get<double>(), loc[1].get<double>()};
}

json parse_json_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw MalformedInput("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_point(json_out::Writer& w, const PitchPoint& p) {
  w.begin_object().key("x").value(p.x).key("y").value(p.y).end_object();
}

PitchPoint read_point(const json& j) { return {j.at("x").get<double>(), j.at("y").get<double>()}; }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write output file " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out << '\n';
  out.flush();
  if (!out) throw IoError("I/O error writing " + path.string());
}

}  // namespace

TrackingData read_tracking_csv(const std::filesystem::path& home_path, const std::filesystem::path& away_path) {
  const TeamFile home = read_team_file(home_path);
  const TeamFile away = read_team_file(away_path);

  TrackingData data;
  std::vector<RosterEntry> roster;
  std::vector<int> home_ids(home.player_names.size(), -1);
  std::vector<int> away_ids(away.player_names.size(), -1);
  for (std::size_t i = 0; i < home.player_names.size(); ++i) {
    if (!home.has_data[i]) continue;
    home_ids[i] = static_cast<int>(roster.size());
    roster.push_back({home_ids[i], home.player_names[i], Team::Home});
  }
  for (std::size_t i = 0; i < away.player_names.size(); ++i) {
    if (!away.has_data[i]) continue;
    away_ids[i] = static_cast<int>(roster.size());
    roster.push_back({away_ids[i], away.player_names[i], Team::Away});
  }

  std::unordered_map<long long, std::size_t> away_index;
  away_index.reserve(away.rows.size());
  for (std::size_t i = 0; i < away.rows.size(); ++i) {
    away_index.emplace(static_cast<long long>(away.rows[i].period) * 100000000LL + away.rows[i].frame, i);
  }

  std::map<int, MatchHalf> halves;
  std::map<int, double> period_start;
  for (const auto& row : home.rows) {
    ++data.rows_read;
    const TeamRow* other_row = nullptr;
    if (auto it = away_index.find(static_cast<long long>(row.period) * 100000000LL + row.frame); it != away_index.end()) {
      other_row = &away.rows[it->second];
    }
    std::optional<PitchPoint> ball = row.ball;
    if (!ball && other_row) ball = other_row->ball;
    if (!ball) {
      ++data.rows_dropped;
      continue;
    }
    auto [it, inserted] = halves.try_emplace(row.period);
    if (inserted) {
      it->second.half_id = row.period;
      it->second.roster = roster;
      it->second.time_offset = std::floor(row.time);
    }
    MatchHalf& half = it->second;
    TruthFrame frame;
    frame.time = row.time - half.time_offset;
    frame.ball = *ball;
    for (std::size_t i = 0; i < row.players.size(); ++i) {
      if (home_ids[i] >= 0 && row.players[i]) frame.players.push_back({home_ids[i], {Team::Home, false}, *row.players[i]});
    }
    if (other_row) {
      for (std::size_t i = 0; i < other_row->players.size(); ++i) {
        if (away_ids[i] >= 0 && other_row->players[i]) {
          frame.players.push_back({away_ids[i], {Team::Away, false}, *other_row->players[i]});
        }
      }
    }
    if (!half.frames.empty() && !(frame.time > half.frames.back().time)) {
      throw MalformedInput("tracking rows are not time-sorted in period " + std::to_string(row.period));
    }
    half.frames.push_back(std::move(frame));
  }

  for (auto& [period, half] : halves) {
    assign_keepers(half);
    data.halves.push_back(std::move(half));
  }
  if (data.rows_read > 0 && data.rows_dropped * 20 > data.rows_read) {
    std::ostringstream msg;
    msg << "dropped " << data.rows_dropped << " of " << data.rows_read << " tracking rows without a ball position";
    data.warnings.push_back(msg.str());
  }
  return data;
}

void read_events_csv(const std::filesystem::path& path, std::vector<MatchHalf>& halves) {
  auto in = open_input(path);
  const std::string label = path.filename().string();
  std::string line;
  if (!std::getline(in, line)) throw MalformedInput("empty event file " + label);
  const auto header = split_csv(line);
  std::map<std::string, std::size_t, std::less<>> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(std::string(trim(header[i])), i);
  for (const char* needed : {"Team", "Type", "Period", "Start Time [s]"}) {
    if (!col.count(needed)) throw MalformedInput(std::string("event header lacks '") + needed + "' in " + label);
  }
  const auto sx = col.find("Start X");
  const auto sy = col.find("Start Y");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    const std::string where = label + " line " + std::to_string(line_no);
    auto cell = [&](std::size_t c) { return c < cells.size() ? trim(cells[c]) : std::string_view{}; };
    const int period = static_cast<int>(parse_cell(cell(col.at("Period")), where));
    auto half = std::find_if(halves.begin(), halves.end(), [&](const MatchHalf& h) { return h.half_id == period; });
    if (half == halves.end()) continue;
    Event ev;
    ev.time = parse_cell(cell(col.at("Start Time [s]")), where) - half->time_offset;
    ev.kind = std::string(cell(col.at("Type")));
    ev.attacking_team = parse_team(std::string(cell(col.at("Team"))));
    if (sx != col.end() && sy != col.end()) {
      const double x = parse_cell(cell(sx->second), where);
      const double y = parse_cell(cell(sy->second), where);
      if (std::isfinite(x) && std::isfinite(y) && x >= -kPercentTolerance && x <= 1 + kPercentTolerance &&
          y >= -kPercentTolerance && y <= 1 + kPercentTolerance) {
        ev.ball = scale_percent_coords({x, y}, where);
      }
    }
    half->events.push_back(std::move(ev));
  }
  for (auto& h : halves) {
    std::stable_sort(h.events.begin(), h.events.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
  }
}

PitchPoint flip_axes(const PitchPoint& p) { return {kPitchLength - p.x, kPitchWidth - p.y}; }

Read360Result read_360_frames(const std::filesystem::path& frames_path, const std::filesystem::path& events_path,
                              const Read360Options& options) {
  const json frames = parse_json_file(frames_path);
  const json events = parse_json_file(events_path);
  if (!frames.is_array() || !events.is_array()) throw MalformedInput("360 frames and events must be JSON arrays");

  struct EventInfo {
    double time = 0.0;
    int period = 1;
    std::string team;
    std::optional<PitchPoint> location;
  };
  std::unordered_map<std::string, EventInfo> by_id;
  std::vector<EventInfo> ordered;
  std::optional<std::string> home = options.home_team;
  for (const auto& e : events) {
    EventInfo info;
    info.time = e.contains("timestamp") ? parse_timestamp(e.at("timestamp")) : 0.0;
    info.period = e.value("period", 1);
    if (!e.contains("team")) continue;
    info.team = team_label(e.at("team"));
    info.location = location_of(e);
    if (!home) home = info.team;
    if (e.contains("id")) {
      const auto& id = e.at("id");
      by_id.emplace(id.is_string() ? id.get<std::string>() : id.dump(), info);
    }
    ordered.push_back(std::move(info));
  }

  Read360Result result;
  struct Pending {
    std::size_t index;
    ObservationFrame frame;
  };
  std::map<int, std::vector<Pending>> per_period;

  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    const EventInfo* ev = nullptr;
    for (const char* key : {"event_uuid", "event_id", "id"}) {
      if (f.contains(key)) {
        const auto& id = f.at(key);
        if (auto it = by_id.find(id.is_string() ? id.get<std::string>() : id.dump()); it != by_id.end()) ev = &it->second;
        break;
      }
    }
    if (!ev && f.contains("timestamp")) {
      const double t = parse_timestamp(f.at("timestamp"));
      const int period = f.value("period", 1);
      double best = options.match_window_s;
      for (const auto& cand : ordered) {
        if (cand.period == period && std::abs(cand.time - t) <= best) {
          best = std::abs(cand.time - t);
          ev = &cand;
        }
      }
    }
    if (!ev) {
      result.errors.push_back({i, "orphan frame", std::nullopt, std::nullopt, std::nullopt});
      continue;
    }

    const bool acting_home = ev->team == *home;
    const Team acting = acting_home ? Team::Home : Team::Away;
    // Event coordinates face the acting team's attack; fixed axis has home attacking +x.
    std::optional<PitchPoint> event_ball;
    if (ev->location) event_ball = acting_home ? *ev->location : flip_axes(*ev->location);

    std::optional<PitchPoint> raw_ball;
    const json empty = json::array();
    const json& freeze = f.contains("freeze_frame") ? f.at("freeze_frame") : empty;
    for (const auto& p : freeze) {
      if (p.value("actor", false)) raw_ball = location_of(p);
    }

    bool flip = !acting_home;
    PitchPoint ball;
    if (raw_ball && event_ball) {
      const double keep = distance(*raw_ball, *event_ball);
      const double flipped = distance(flip_axes(*raw_ball), *event_ball);
      flip = flipped < keep;
      const double best = std::min(keep, flipped);
      if (best > options.axis_threshold) {
        result.errors.push_back({i, "ball disagreement", event_ball, flip ? flip_axes(*raw_ball) : *raw_ball, best});
        continue;
      }
      ball = *event_ball;
    } else if (event_ball) {
      ball = *event_ball;
    } else if (raw_ball) {
      ball = flip ? flip_axes(*raw_ball) : *raw_ball;
    } else {
      result.errors.push_back({i, "no ball position", std::nullopt, std::nullopt, std::nullopt});
      continue;
    }

    ObservationFrame frame;
    frame.time = ev->time;
    frame.ball = clamp_to_pitch(ball);
    for (const auto& p : freeze) {
      auto loc = location_of(p);
      if (!loc) continue;
      const Team team = p.value("teammate", false) ? acting : other(acting);
      frame.visible.push_back({{team, p.value("keeper", false)}, clamp_to_pitch(flip ? flip_axes(*loc) : *loc)});
    }
    try {
      check_visible_caps(frame);
    } catch (const MalformedInput&) {
      result.errors.push_back({i, "too many visible players", event_ball, raw_ball, std::nullopt});
      continue;
    }
    per_period[ev->period].push_back({i, std::move(frame)});
  }

  for (auto& [period, pending] : per_period) {
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Pending& a, const Pending& b) { return a.frame.time < b.frame.time; });
    DiscreteMatchRecord record;
    record.half_id = period;
    record.source = RecordSource::Broadcast360;
    record.home_attacks_positive_x = true;
    for (auto& p : pending) {
      if (!record.frames.empty() && !(p.frame.time > record.frames.back().time)) {
        result.errors.push_back({p.index, "duplicate timestamp", std::nullopt, std::nullopt, std::nullopt});
        continue;
      }
      record.frames.push_back(std::move(p.frame));
    }
    result.halves.push_back(std::move(record));
  }
  std::sort(result.errors.begin(), result.errors.end(),
            [](const AxisErrorRecord& a, const AxisErrorRecord& b) { return a.frame_index < b.frame_index; });
  return result;
}

void write_discrete(const DiscreteMatchRecord& record, const std::filesystem::path& path) {
  auto out = open_output(path);
  json_out::Writer w(out);
  w.begin_object();
  w.key("format").value("track-enrich-discrete");
  w.key("version").value_int(1);
  w.key("half_id").value_int(record.half_id);
  w.key("source").value(record.source == RecordSource::Simulated ? "simulated" : "broadcast-360");
  w.key("home_attacks_positive_x").value(record.home_attacks_positive_x);
  w.key("frames").begin_array();
  for (const auto& f : record.frames) {
    w.begin_object();
    w.key("time_s").value(f.time);
    w.key("ball");
    write_point(w, f.ball);
    w.key("players").begin_array();
    for (const auto& v : f.visible) {
      w.begin_object()
          .key("team").value(team_name(v.tag.team))
          .key("keeper").value(v.tag.is_goalkeeper)
          .key("x").value(v.pos.x)
          .key("y").value(v.pos.y)
          .end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  finish_output(out, path);
}

DiscreteMatchRecord read_discrete(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  try {
    if (j.value("format", "") != "track-enrich-discrete") throw MalformedInput("not a discrete record: " + path.string());
    DiscreteMatchRecord record;
    record.half_id = j.at("half_id").get<int>();
    record.source = j.at("source").get<std::string>() == "simulated" ? RecordSource::Simulated : RecordSource::Broadcast360;
    record.home_attacks_positive_x = j.at("home_attacks_positive_x").get<bool>();
    for (const auto& f : j.at("frames")) {
      ObservationFrame frame;
      frame.time = f.at("time_s").get<double>();
      frame.ball = read_point(f.at("ball"));
      for (const auto& p : f.at("players")) {
        frame.visible.push_back(
            {{parse_team(p.at("team").get<std::string>()), p.at("keeper").get<bool>()}, read_point(p)});
      }
      check_visible_caps(frame);
      if (!record.frames.empty() && !(frame.time > record.frames.back().time)) {
        throw MalformedInput("discrete frames are not time-sorted in " + path.string());
      }
      record.frames.push_back(std::move(frame));
    }
    return record;
  } catch (const json::exception& e) {
    throw MalformedInput("malformed discrete record " + path.string() + ": " + e.what());
  }
}

void write_enriched(const std::vector<EnrichedFrame>& frames, const std::filesystem::path& path) {
  if (frames.empty()) throw PreconditionError("no enriched frames to write");
  auto out = open_output(path);
  json_out::Writer w(out);
  w.begin_array();
  double last = -std::numeric_limits<double>::infinity();
  for (const auto& f : frames) {
    if (!(f.time > last)) throw PreconditionError("enriched frames must be time-sorted");
    last = f.time;
    w.begin_object();
    w.key("time_s").value(f.time);
    w.key("ball");
    write_point(w, f.ball);
    w.key("players").begin_array();
    for (const auto& p : f.players) {
      w.begin_object()
          .key("team").value(team_name(p.tag.team))
          .key("keeper").value(p.tag.is_goalkeeper)
          .key("x").value(p.pos.x)
          .key("y").value(p.pos.y)
          .key("visible").value(p.provenance == Provenance::Observed)
          .end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  finish_output(out, path);
}

std::vector<EnrichedFrame> read_enriched(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  try {
    std::vector<EnrichedFrame> frames;
    for (const auto& f : j) {
      EnrichedFrame frame;
      frame.time = f.at("time_s").get<double>();
      frame.ball = read_point(f.at("ball"));
      for (const auto& p : f.at("players")) {
        frame.players.push_back({{parse_team(p.at("team").get<std::string>()), p.at("keeper").get<bool>()},
                                 read_point(p),
                                 p.at("visible").get<bool>() ? Provenance::Observed : Provenance::Estimated});
      }
      frames.push_back(std::move(frame));
    }
    return frames;
  } catch (const json::exception& e) {
    throw MalformedInput("malformed enriched file " + path.string() + ": " + e.what());
  }
}

void write_axis_errors(const std::vector<AxisErrorRecord>& errors, const std::filesystem::path& path) {
  auto out = open_output(path);
  json_out::Writer w(out);
  w.begin_array();
  for (const auto& e : errors) {
    w.begin_object();
    w.key("frame_index").value_int(static_cast<long long>(e.frame_index));
    w.key("reason").value(e.reason);
    w.key("ball_event");
    if (e.ball_event) write_point(w, *e.ball_event); else w.null();
    w.key("ball_frame");
    if (e.ball_frame) write_point(w, *e.ball_frame); else w.null();
    w.key("disagreement").value(e.disagreement);
    w.end_object();
  }
  w.end_array();
  finish_output(out, path);
}

std::vector<AxisErrorRecord> read_axis_errors(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  std::vector<AxisErrorRecord> errors;
  for (const auto& e : j) {
    AxisErrorRecord r;
    r.frame_index = e.at("frame_index").get<std::size_t>();
    r.reason = e.at("reason").get<std::string>();
    if (!e.at("ball_event").is_null()) r.ball_event = read_point(e.at("ball_event"));
    if (!e.at("ball_frame").is_null()) r.ball_frame = read_point(e.at("ball_frame"));
    if (!e.at("disagreement").is_null()) r.disagreement = e.at("disagreement").get<double>();
    errors.push_back(std::move(r));
  }
  return errors;
}

void write_trajectories(const std::vector<Trajectory>& trajectories, int half_id, const std::filesystem::path& path) {
  auto out = open_output(path);
  json_out::Writer w(out, false);
  w.begin_object();
  w.key("format").value("track-enrich-trajectories");
  w.key("half_id").value_int(half_id);
  w.key("trajectories").begin_array();
  for (const auto& tr : trajectories) {
    w.begin_object();
    w.key("team").value(team_name(tr.tag().team));
    w.key("keeper").value(tr.tag().is_goalkeeper);
    w.key("points").begin_array();
    for (const auto& p : tr.points()) {
      w.begin_object().key("t").value(p.time).key("x").value(p.pos.x).key("y").value(p.pos.y);
      w.key("observed").value(p.observed).end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  finish_output(out, path);
}

std::vector<Trajectory> read_trajectories(const std::filesystem::path& path, int* half_id) {
  const json j = parse_json_file(path);
  try {
    if (half_id) *half_id = j.at("half_id").get<int>();
    std::vector<Trajectory> out;
    for (const auto& tr : j.at("trajectories")) {
      Trajectory t({parse_team(tr.at("team").get<std::string>()), tr.at("keeper").get<bool>()});
      for (const auto& p : tr.at("points")) {
        t.append({{p.at("x").get<double>(), p.at("y").get<double>()}, p.at("t").get<double>(), p.at("observed").get<bool>()});
      }
      out.push_back(std::move(t));
    }
    return out;
  } catch (const json::exception& e) {
    throw MalformedInput("malformed trajectory file " + path.string() + ": " + e.what());
  }
}

}  // namespace trackenrich
