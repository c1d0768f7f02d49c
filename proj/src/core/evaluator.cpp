#include "core/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "core/assignment.hpp"
#include "core/broadcast_sim.hpp"
#include "core/json_out.hpp"

namespace trackenrich {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Same order as enrich_at: home outfield, home keeper, away outfield, away keeper.
std::vector<const Trajectory*> ordered_trajectories(const TrajectorySet& set) {
  std::vector<const Trajectory*> out;
  for (Team team : {Team::Home, Team::Away}) {
    const auto& tt = set.team(team);
    for (const auto& t : tt.outfield) out.push_back(&t);
    out.push_back(&tt.goalkeeper);
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

HalfReconstruction reconstruct(const DiscreteMatchRecord& record, const ForecastModel& model, double alpha,
                               const AssignerConfig& cfg) {
  HalfReconstruction out;
  out.set = build_trajectories(record, model, cfg);
  out.field = compute_velocity_field(out.set.all_outfield(), alpha, model.grid_step);
  return out;
}

EnrichedFrame enrich_at(const HalfReconstruction& recon, const ForecastModel& model, double t,
                        std::vector<double>* occlusion_s) {
  EnrichedFrame frame;
  frame.time = t;
  frame.ball = recon.set.ball.at(t);
  if (occlusion_s) occlusion_s->clear();
  for (const Trajectory* tr : ordered_trajectories(recon.set)) {
    if (tr->empty()) throw PreconditionError("reconstruction holds an empty trajectory");
    const ContinuousPath path(*tr, recon.field, model, recon.set.ball);
    const TrajectoryPoint* p = tr->point_at(t);
    const bool observed = p != nullptr && p->observed;
    frame.players.push_back({tr->tag(), path.position_at(t), observed ? Provenance::Observed : Provenance::Estimated});
    if (occlusion_s) occlusion_s->push_back(tr->seconds_to_nearest_observation(t));
  }
  return frame;
}

std::vector<EnrichedFrame> enriched_frames(const HalfReconstruction& recon, const ForecastModel& model,
                                           const DiscreteMatchRecord& record, double step) {
  if (record.frames.empty()) throw PreconditionError("record has no frames");
  if (!(step > 0.0)) throw PreconditionError("output step must be positive");
  std::vector<EnrichedFrame> out;
  const double first = record.frames.front().time;
  const double last = record.frames.back().time;
  const auto k0 = static_cast<long>(std::ceil(first / step - kTimeEps));
  const auto k1 = static_cast<long>(std::floor(last / step + kTimeEps));
  for (long k = k0; k <= k1; ++k) out.push_back(enrich_at(recon, model, static_cast<double>(k) * step));
  return out;
}

FrameError match_and_score(const EnrichedFrame& estimated, const TruthFrame& truth,
                           const std::vector<double>* occlusion_s) {
  FrameError out;
  out.time = estimated.time;
  for (Team team : {Team::Home, Team::Away}) {
    std::vector<std::size_t> est_idx;
    std::vector<PitchPoint> true_pos;
    for (std::size_t i = 0; i < estimated.players.size(); ++i) {
      const auto& p = estimated.players[i];
      if (p.tag.team == team && !p.tag.is_goalkeeper) est_idx.push_back(i);
    }
    for (const auto& p : truth.players) {
      if (p.tag.team == team && !p.tag.is_goalkeeper) true_pos.push_back(p.pos);
    }
    if (est_idx.size() != true_pos.size()) {
      std::ostringstream msg;
      msg << "at t=" << estimated.time << " " << team_name(team) << " has " << est_idx.size() << " estimated but "
          << true_pos.size() << " true outfielders";
      throw ConsistencyError(msg.str());
    }
    CostMatrix cost(true_pos.size(), est_idx.size());
    for (std::size_t r = 0; r < true_pos.size(); ++r) {
      for (std::size_t c = 0; c < est_idx.size(); ++c) cost(r, c) = distance(true_pos[r], estimated.players[est_idx[c]].pos);
    }
    const Assignment a = solve_assignment(cost);
    for (std::size_t c = 0; c < est_idx.size(); ++c) {
      const auto& est = estimated.players[est_idx[c]];
      PlayerError pe;
      pe.team = team;
      pe.truth = true_pos[a.row_of[c]];
      pe.estimate = est.pos;
      pe.error = distance(pe.truth, pe.estimate);
      pe.provenance = est.provenance;
      pe.seconds_to_nearest_observation = occlusion_s ? (*occlusion_s)[est_idx[c]] : kNaN;
      out.total_squared_error += pe.error * pe.error;
      out.players.push_back(pe);
    }
  }
  return out;
}

HalfEvaluation evaluate_half(const DiscreteMatchRecord& record, const HalfReconstruction& recon,
                             const ForecastModel& model, const MatchHalf& truth) {
  HalfEvaluation ev;
  ev.half_id = record.half_id;
  const auto order = ordered_trajectories(recon.set);
  std::vector<double> occ;
  const auto& frames = record.frames;

  std::vector<std::size_t> kept;  // record frame index of each scored in-phase frame
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const EnrichedFrame est = enrich_at(recon, model, frames[i].time, &occ);
    FrameError fe;
    try {
      fe = match_and_score(est, ground_truth_at(truth, frames[i].time), &occ);
    } catch (const ConsistencyError&) {
      ++ev.skipped_frames;
      continue;
    }
    fe.phase = Phase::InPhase;
    ev.in_phase.push_back(std::move(fe));
    kept.push_back(i);
  }
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
    const double t_prev = frames[i].time;
    const double t = 0.5 * (t_prev + frames[i + 1].time);
    const EnrichedFrame est = enrich_at(recon, model, t, &occ);
    FrameError fe;
    try {
      fe = match_and_score(est, ground_truth_at(truth, t), &occ);
    } catch (const ConsistencyError&) {
      ++ev.skipped_frames;
      continue;
    }
    fe.phase = Phase::OutOfPhase;
    // match_and_score emits players team by team in estimate order.
    std::size_t k = 0;
    for (Team team : {Team::Home, Team::Away}) {
      for (std::size_t e = 0; e < est.players.size(); ++e) {
        const auto& p = est.players[e];
        if (p.tag.team != team || p.tag.is_goalkeeper) continue;
        const TrajectoryPoint* prev = order[e]->point_at(t_prev);
        fe.players[k++].observed_previous_frame = prev != nullptr && prev->observed;
      }
    }
    ev.out_of_phase.push_back(std::move(fe));
  }

  if (!frames.empty()) {
    const double lo = frames.front().time, hi = frames.back().time;
    const double half_gap = frames.size() > 1 ? 0.5 * (frames[1].time - frames[0].time) : 0.5;
    std::set<std::size_t> picked;
    for (const auto& e : truth.events) {
      if (e.time < lo - half_gap || e.time > hi + half_gap) continue;
      auto it = std::lower_bound(frames.begin(), frames.end(), e.time,
                                 [](const ObservationFrame& f, double v) { return f.time < v; });
      std::size_t idx = static_cast<std::size_t>(it - frames.begin());
      if (idx == frames.size() || (idx > 0 && e.time - frames[idx - 1].time <= frames[idx].time - e.time)) --idx;
      auto pos = std::lower_bound(kept.begin(), kept.end(), idx);
      if (pos != kept.end() && *pos == idx) picked.insert(static_cast<std::size_t>(pos - kept.begin()));
    }
    ev.event_frame_indices.assign(picked.begin(), picked.end());
  }
  return ev;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= values.size()) return values.back();
  return values[i] + (pos - static_cast<double>(i)) * (values[i + 1] - values[i]);
}

ErrorSummary summarize(const std::vector<const HalfEvaluation*>& halves) {
  ErrorSummary s;
  std::vector<double> all_in, off_in, all_out, prev, off_event;
  std::map<int, std::vector<double>> buckets;
  for (const HalfEvaluation* h : halves) {
    s.frames += h->in_phase.size();
    s.out_of_phase_frames += h->out_of_phase.size();
    s.event_frames += h->event_frame_indices.size();
    for (const auto& f : h->in_phase) {
      for (const auto& p : f.players) {
        all_in.push_back(p.error);
        if (p.provenance == Provenance::Estimated) off_in.push_back(p.error);
        if (std::isfinite(p.seconds_to_nearest_observation)) {
          buckets[static_cast<int>(std::lround(p.seconds_to_nearest_observation))].push_back(p.error);
        }
      }
    }
    for (const auto& f : h->out_of_phase) {
      for (const auto& p : f.players) {
        all_out.push_back(p.error);
        if (p.observed_previous_frame) prev.push_back(p.error);
      }
    }
    for (std::size_t idx : h->event_frame_indices) {
      for (const auto& p : h->in_phase[idx].players) {
        if (p.provenance == Provenance::Estimated) off_event.push_back(p.error);
      }
    }
  }
  s.predictions = off_in.size();
  s.mean_all_in_phase = mean_of(all_in);
  s.mean_offcam_in_phase = mean_of(off_in);
  s.median_offcam_in_phase = quantile(off_in, 0.5);
  s.mean_all_out_of_phase = mean_of(all_out);
  s.mean_prev_frame_observed = mean_of(prev);
  s.mean_offcam_event_frames = mean_of(off_event);
  for (auto& [bucket, errs] : buckets) {
    CurveBucket b;
    b.bucket_s = bucket;
    b.mean = mean_of(errs);
    b.p12_5 = quantile(errs, 0.125);
    b.p87_5 = quantile(errs, 0.875);
    b.p2_5 = quantile(errs, 0.025);
    b.p97_5 = quantile(errs, 0.975);
    b.n = errs.size();
    s.curve.push_back(b);
  }
  return s;
}

ErrorReport build_report(const std::vector<HalfEvaluation>& halves) {
  ErrorReport r;
  std::vector<const HalfEvaluation*> all;
  for (const auto& h : halves) {
    all.push_back(&h);
    r.per_half.emplace_back(h.half_id, summarize({&h}));
  }
  r.pooled = summarize(all);
  return r;
}

std::vector<SelectedFrame> percentile_frames(const std::vector<FrameError>& frames, const std::vector<double>& percentiles,
                                             std::size_t min_frames) {
  if (frames.size() < min_frames || frames.empty()) {
    throw PreconditionError("percentile selection needs at least " + std::to_string(std::max<std::size_t>(min_frames, 1)) +
                            " frames");
  }
  std::vector<double> totals;
  for (const auto& f : frames) totals.push_back(f.total_squared_error);
  std::vector<SelectedFrame> out;
  for (double p : percentiles) {
    SelectedFrame sel;
    sel.percentile = p;
    sel.target = quantile(totals, p / 100.0);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < totals.size(); ++i) {
      const double d = std::abs(totals[i] - sel.target);
      if (d < best) { best = d; sel.index = i; }
    }
    out.push_back(sel);
  }
  return out;
}

std::size_t count_identity_switches(const TrajectorySet& set, const MatchHalf& truth) {
  std::size_t switches = 0;
  for (const auto& tr : set.all_outfield()) {
    int prev = -1;
    for (const auto& p : tr.points()) {
      if (!p.observed) continue;
      const TruthFrame& tf = ground_truth_at(truth, p.time);
      int id = -1;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& tp : tf.players) {
        if (tp.tag != tr.tag()) continue;
        const double d = distance(tp.pos, p.pos);
        if (d < best) { best = d; id = tp.id; }
      }
      if (prev >= 0 && id != prev) ++switches;
      prev = id;
    }
  }
  return switches;
}

namespace {

std::string fmt2(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

}  // namespace

std::string render_pitch_svg(const EnrichedFrame& frame, const std::vector<std::optional<int>>& annotations) {
  constexpr double scale = 8.0;  // px per metre
  constexpr double margin = 5.0;
  constexpr double radius = 1.6;
  auto px = [&](double metres) { return fmt2((metres + margin) * scale); };
  auto len = [&](double metres) { return fmt2(metres * scale); };
  std::ostringstream os;
  const double w = (kPitchLength + 2 * margin) * scale;
  const double h = (kPitchWidth + 2 * margin) * scale;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt2(w) << "\" height=\"" << fmt2(h)
     << "\" viewBox=\"0 0 " << fmt2(w) << ' ' << fmt2(h) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fmt2(w) << "\" height=\"" << fmt2(h) << "\" fill=\"#3a7d44\"/>\n";
  os << "<g class=\"lines\" stroke=\"#ffffff\" stroke-width=\"2\" fill=\"none\">\n";
  auto rect = [&](double x, double y, double rw, double rh) {
    os << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << len(rw) << "\" height=\"" << len(rh) << "\"/>\n";
  };
  rect(0, 0, kPitchLength, kPitchWidth);
  rect(0, 18, 18, 44);
  rect(kPitchLength - 18, 18, 18, 44);
  rect(0, 30, 6, 20);
  rect(kPitchLength - 6, 30, 6, 20);
  os << "<line x1=\"" << px(kPitchLength / 2) << "\" y1=\"" << px(0) << "\" x2=\"" << px(kPitchLength / 2) << "\" y2=\""
     << px(kPitchWidth) << "\"/>\n";
  os << "<circle cx=\"" << px(kPitchLength / 2) << "\" cy=\"" << px(kPitchWidth / 2) << "\" r=\"" << len(10) << "\"/>\n";
  os << "</g>\n";
  for (std::size_t i = 0; i < frame.players.size(); ++i) {
    const auto& p = frame.players[i];
    const char* colour = p.tag.team == Team::Home ? "#d62728" : "#1f77b4";
    const bool seen = p.provenance == Provenance::Observed;
    os << "<circle class=\"player\" cx=\"" << px(p.pos.x) << "\" cy=\"" << px(p.pos.y) << "\" r=\"" << len(radius)
       << "\" fill=\"" << colour << "\" fill-opacity=\"" << (seen ? "1.00" : "0.55") << "\" stroke=\""
       << (p.tag.is_goalkeeper ? "#ffd700" : "#000000") << "\" stroke-width=\"1.5\"/>\n";
    if (i < annotations.size() && annotations[i]) {
      os << "<text class=\"age\" x=\"" << px(p.pos.x) << "\" y=\"" << px(p.pos.y + 0.6) << "\" font-size=\""
         << len(1.8) << "\" text-anchor=\"middle\" fill=\"#ffffff\">" << *annotations[i] << "</text>\n";
    }
  }
  os << "<circle class=\"ball\" cx=\"" << px(frame.ball.x) << "\" cy=\"" << px(frame.ball.y) << "\" r=\"" << len(0.8)
     << "\" fill=\"#000000\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << px(0) << "\" y=\"" << fmt2(margin * scale * 0.7) << "\" font-size=\"16\" fill=\"#ffffff\">t = "
     << fmt2(frame.time) << " s</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_pitch_svg(const EnrichedFrame& frame, const std::vector<std::optional<int>>& annotations,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << render_pitch_svg(frame, annotations);
  if (!out) throw IoError("I/O error writing " + path.string());
}

namespace {

void write_summary(json_out::Writer& w, const ErrorSummary& s) {
  auto num = [](double v) { return std::isfinite(v) ? std::optional<double>(v) : std::nullopt; };
  w.begin_object();
  w.key("mean_all_in_phase").value(num(s.mean_all_in_phase));
  w.key("mean_offcam_in_phase").value(num(s.mean_offcam_in_phase));
  w.key("median_offcam_in_phase").value(num(s.median_offcam_in_phase));
  w.key("mean_all_out_of_phase").value(num(s.mean_all_out_of_phase));
  w.key("mean_prev_frame_observed").value(num(s.mean_prev_frame_observed));
  w.key("mean_offcam_event_frames").value(num(s.mean_offcam_event_frames));
  w.key("counts").begin_object();
  w.key("frames").value_int(static_cast<long long>(s.frames));
  w.key("predictions").value_int(static_cast<long long>(s.predictions));
  w.key("out_of_phase_frames").value_int(static_cast<long long>(s.out_of_phase_frames));
  w.key("event_frames").value_int(static_cast<long long>(s.event_frames));
  w.end_object();
  w.key("curve").begin_array();
  for (const auto& b : s.curve) {
    w.begin_object();
    w.key("bucket_s").value_int(b.bucket_s);
    w.key("mean_m").value(b.mean);
    w.key("p12_5").value(b.p12_5);
    w.key("p87_5").value(b.p87_5);
    w.key("p2_5").value(b.p2_5);
    w.key("p97_5").value(b.p97_5);
    w.key("n").value_int(static_cast<long long>(b.n));
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

}  // namespace

void write_report_json(const ErrorReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  json_out::Writer w(out);
  w.begin_object();
  w.key("format").value("track-enrich-report");
  w.key("pooled");
  write_summary(w, report.pooled);
  w.key("halves").begin_array();
  for (const auto& [half, s] : report.per_half) {
    w.begin_object();
    w.key("half_id").value_int(half);
    w.key("summary");
    write_summary(w, s);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  out << '\n';
  if (!out) throw IoError("I/O error writing " + path.string());
}

std::string report_table(const ErrorReport& report) {
  std::ostringstream os;
  auto row = [&](const char* label, auto getter) {
    os << "  " << label;
    for (std::size_t pad = std::char_traits<char>::length(label); pad < 34; ++pad) os << ' ';
    os << fmt2(getter(report.pooled));
    for (const auto& [half, s] : report.per_half) os << "  h" << half << "=" << fmt2(getter(s));
    os << '\n';
  };
  os << "error summary (metres, pooled over halves)\n";
  row("mean in-phase, all players", [](const ErrorSummary& s) { return s.mean_all_in_phase; });
  row("mean in-phase, off-camera", [](const ErrorSummary& s) { return s.mean_offcam_in_phase; });
  row("median in-phase, off-camera", [](const ErrorSummary& s) { return s.median_offcam_in_phase; });
  row("mean out-of-phase, all players", [](const ErrorSummary& s) { return s.mean_all_out_of_phase; });
  row("mean, seen in previous frame", [](const ErrorSummary& s) { return s.mean_prev_frame_observed; });
  row("mean off-camera at event frames", [](const ErrorSummary& s) { return s.mean_offcam_event_frames; });
  os << "  frames " << report.pooled.frames << ", off-camera predictions " << report.pooled.predictions << '\n';
  return os.str();
}

void write_curve_csv(const std::vector<CurveBucket>& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "bucket_s,mean_m,p12.5,p87.5,p2.5,p97.5,n\n";
  for (const auto& b : curve) {
    out << b.bucket_s << ',' << json_out::format_number(b.mean) << ',' << json_out::format_number(b.p12_5) << ','
        << json_out::format_number(b.p87_5) << ',' << json_out::format_number(b.p2_5) << ','
        << json_out::format_number(b.p97_5) << ',' << b.n << '\n';
  }
  if (!out) throw IoError("I/O error writing " + path.string());
}

}  // namespace trackenrich
