#pragma once

// End-to-end dataset generation: per-video scenario sampling, motion
// variation, pose and camera simulation, ground-truth tracks, the JSON Lines
// manifest, dataset statistics and stratified train/test splits.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "phav/kite_camera.hpp"
#include "phav/motion.hpp"
#include "phav/params.hpp"
#include "phav/ragdoll.hpp"
#include "phav/scenario.hpp"
#include "phav/variation.hpp"

namespace phav {

namespace fs = std::filesystem;

struct ManifestRecord {
  std::string id;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string action;
  ActionClass action_class = ActionClass::sub_hmdb;
  std::string human_model;
  Environment environment = Environment::urban;
  CameraBehavior camera = CameraBehavior::kite;
  VariationKind variation = VariationKind::none;
  DayPhase day_phase = DayPhase::day;
  Weather weather = Weather::clear;
  double clock_time = 0.0;
  double duration = 0.0;
  std::size_t frames = 0;
  double fps = 30.0;
  int width = 340;
  int height = 256;
  std::string motion;
  double motion_duration = 0.0;
  int supporting_actors = 0;
  int background_actors = 0;
  std::optional<double> event_time;
  std::string track_file;  ///< relative to the output directory; empty if not written
  std::size_t violations = 0;
  json details;  ///< world, rig, variation plan and placements

  bool operator==(const ManifestRecord& o) const;
};

// ---------------------------------------------------------------------------
// Record JSON

namespace io {

inline json record_to_json(const ManifestRecord& r) {
  return {{"id", r.id},
          {"index", r.index},
          {"seed", r.seed},
          {"action", r.action},
          {"action_class", std::string(to_string(r.action_class))},
          {"human_model", r.human_model},
          {"environment", std::string(to_string(r.environment))},
          {"camera", std::string(to_string(r.camera))},
          {"variation", std::string(to_string(r.variation))},
          {"day_phase", std::string(to_string(r.day_phase))},
          {"weather", std::string(to_string(r.weather))},
          {"clock_time", r.clock_time},
          {"duration", r.duration},
          {"frames", r.frames},
          {"fps", r.fps},
          {"resolution", json::array({r.width, r.height})},
          {"motion", r.motion},
          {"motion_duration", r.motion_duration},
          {"supporting_actors", r.supporting_actors},
          {"background_actors", r.background_actors},
          {"event_time", r.event_time ? json(*r.event_time) : json(nullptr)},
          {"track_file", r.track_file},
          {"violations", r.violations},
          {"details", r.details}};
}

inline ManifestRecord record_from_json(const json& j) {
  ManifestRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.index = j.at("index").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.action = j.at("action").get<std::string>();
    r.action_class = parse_enum<ActionClass>(j.at("action_class").get<std::string>());
    r.human_model = j.at("human_model").get<std::string>();
    r.environment = parse_enum<Environment>(j.at("environment").get<std::string>());
    r.camera = parse_enum<CameraBehavior>(j.at("camera").get<std::string>());
    r.variation = parse_enum<VariationKind>(j.at("variation").get<std::string>());
    r.day_phase = parse_enum<DayPhase>(j.at("day_phase").get<std::string>());
    r.weather = parse_enum<Weather>(j.at("weather").get<std::string>());
    r.clock_time = j.at("clock_time").get<double>();
    r.duration = j.at("duration").get<double>();
    r.frames = j.at("frames").get<std::size_t>();
    r.fps = j.at("fps").get<double>();
    r.width = j.at("resolution").at(0).get<int>();
    r.height = j.at("resolution").at(1).get<int>();
    r.motion = j.at("motion").get<std::string>();
    r.motion_duration = j.at("motion_duration").get<double>();
    r.supporting_actors = j.at("supporting_actors").get<int>();
    r.background_actors = j.at("background_actors").get<int>();
    if (j.contains("event_time") && !j["event_time"].is_null()) r.event_time = j["event_time"].get<double>();
    r.track_file = j.value("track_file", std::string{});
    r.violations = j.at("violations").get<std::size_t>();
    r.details = j.value("details", json::object());
  } catch (const json::exception& e) {
    throw ParseError("manifest record '" + r.id + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError("manifest record '" + r.id + "': " + e.what());
  }
  return r;
}

}  // namespace io

inline bool ManifestRecord::operator==(const ManifestRecord& o) const {
  return io::record_to_json(*this) == io::record_to_json(o);
}

// ---------------------------------------------------------------------------
// One video

namespace detail {

inline void append_fixed(std::string& out, double v) {
  char buf[48];
  if (v == 0.0) v = 0.0;  // no "-0.000000"
  const int n = std::snprintf(buf, sizeof buf, "%.6f", v);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace detail

/// CSV header of the per-video track file.
inline std::string track_csv_header() {
  std::string h = "frame,cam_px,cam_py,cam_pz,look_x,look_y,look_z";
  for (std::size_t k = 0; k < kMuscleCount; ++k) {
    const std::string j = "j" + std::to_string(k);
    h += "," + j + "_wx," + j + "_wy," + j + "_wz," + j + "_sx," + j + "_sy," + j + "_vis";
  }
  h += ",bbox_x0,bbox_y0,bbox_x1,bbox_y1\n";
  return h;
}

struct VideoOutput {
  ManifestRecord record;
  ScenarioDescriptor scenario;
  PoseTrack pose;
  CameraTrajectory camera;
  std::vector<std::array<Projection, kMuscleCount>> projections;
  std::vector<BBox> boxes;
  std::vector<LimitViolation> violations;
};

/// Realizes a sampled scenario: variation, limit enforcement, forward
/// kinematics, camera simulation and joint projection.
inline VideoOutput realize_scenario(const GeneratorParams& params, const MotionLibrary& library,
                                    const ScenarioDescriptor& sc) {
  VideoOutput out;
  out.scenario = sc;
  const SceneFragment& s = sc.scene;
  const MotionClip* base = library.find_clip(s.motion);
  if (base == nullptr) throw std::runtime_error("unknown base motion '" + s.motion + "'");

  const MotionClip varied = apply_variation(*base, s.plan, base->skeleton, &library);
  auto [clamped, report] = enforce_limits(varied);
  out.violations = std::move(report);

  const RootPlacement placement{s.protagonist.position, s.protagonist.heading_deg};
  out.pose = compute_pose_track(clamped, placement, s.duration, params.fps);

  const Muscle focus_muscle = s.camera == CameraBehavior::closeup ? Muscle::head : Muscle::spine;
  std::vector<Vec3> focus;
  focus.reserve(out.pose.frames.size());
  for (const auto& f : out.pose.frames) focus.push_back(f.positions[static_cast<std::size_t>(focus_muscle)]);
  if (focus.empty()) focus.push_back(clip_world_positions(clamped, placement, 0.0)[static_cast<std::size_t>(focus_muscle)]);
  const FocusPath path = focus_from_frames(focus, params.fps);
  const CameraState init = initial_camera_state(s.rig, focus.front(), s.protagonist.heading_deg);
  out.camera = simulate(s.rig, path, params.fps, s.duration, init);

  const Intrinsics k = params.intrinsics();
  out.projections.resize(out.pose.frames.size());
  out.boxes.resize(out.pose.frames.size());
  for (std::size_t f = 0; f < out.pose.frames.size(); ++f) {
    const CameraPose cam = out.camera.frames[f].pose();
    for (std::size_t m = 0; m < kMuscleCount; ++m)
      out.projections[f][m] = project(cam, k, out.pose.frames[f].positions[m]);
    out.boxes[f] = bbox_of(out.projections[f], k);
  }

  ManifestRecord& r = out.record;
  r.seed = sc.seed;
  r.action = sc.action_name;
  r.action_class = sc.action_class;
  r.human_model = sc.human_model;
  r.environment = s.environment;
  r.camera = s.camera;
  r.variation = s.variation;
  r.day_phase = sc.world.phase;
  r.weather = sc.world.weather;
  r.clock_time = sc.world.clock_time;
  r.duration = s.duration;
  r.frames = s.frames;
  r.fps = params.fps;
  r.width = params.width;
  r.height = params.height;
  r.motion = s.motion;
  r.motion_duration = s.motion_duration;
  r.supporting_actors = static_cast<int>(s.supporting.size());
  r.background_actors = static_cast<int>(s.background.size());
  r.event_time = s.event_time;
  r.violations = out.violations.size();

  json supporting = json::array();
  for (const auto& p : s.supporting) supporting.push_back(io::placement_to_json(p));
  json background = json::array();
  for (const auto& b : s.background)
    background.push_back({{"human_model", b.human_model},
                          {"start", b.start},
                          {"destination", b.destination},
                          {"start_position", io::vec_to_json(b.start_position)},
                          {"destination_position", io::vec_to_json(b.destination_position)}});
  r.details = {{"world", io::world_to_json(sc.world)},
               {"rig", io::rig_to_json(s.rig)},
               {"plan", io::plan_to_json(s.plan)},
               {"protagonist", io::placement_to_json(s.protagonist)},
               {"supporting", supporting},
               {"background", background}};
  return out;
}

inline std::string track_csv(const VideoOutput& v) {
  std::string out = track_csv_header();
  out.reserve(out.size() + v.pose.frames.size() * 1600);
  for (std::size_t f = 0; f < v.pose.frames.size(); ++f) {
    out += std::to_string(f);
    const auto& c = v.camera.frames[f];
    for (double x : {c.position.x(), c.position.y(), c.position.z(), c.forward.x(), c.forward.y(), c.forward.z()}) {
      out += ',';
      detail::append_fixed(out, x);
    }
    for (std::size_t m = 0; m < kMuscleCount; ++m) {
      const Vec3& p = v.pose.frames[f].positions[m];
      const Projection& pr = v.projections[f][m];
      for (double x : {p.x(), p.y(), p.z(), pr.visible ? pr.x : -1.0, pr.visible ? pr.y : -1.0}) {
        out += ',';
        detail::append_fixed(out, x);
      }
      out += pr.visible ? ",1" : ",0";
    }
    const BBox& b = v.boxes[f];
    for (double x : {b.x0, b.y0, b.x1, b.y1}) {
      out += ',';
      detail::append_fixed(out, x);
    }
    out += '\n';
  }
  return out;
}

inline std::string violations_csv(const std::vector<LimitViolation>& vs) {
  std::string out = "muscle,keyframe,axis,overshoot_deg\n";
  for (const auto& v : vs) {
    out += std::string(to_string(v.muscle)) + "," + std::to_string(v.keyframe) + "," +
           kAxisNames[static_cast<std::size_t>(v.axis)] + ",";
    detail::append_fixed(out, v.overshoot_deg);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dataset

struct GenerateOptions {
  std::optional<std::size_t> per_category;  ///< videos per action with positive weight
  std::optional<std::size_t> total;         ///< otherwise: this many videos, actions sampled
  std::uint64_t seed = 0;
  fs::path out_dir;       ///< empty: nothing is written
  unsigned jobs = 1;
  bool write_tracks = true;
  int max_attempts = 8;
};

inline std::string video_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%05zu", index);
  return buf;
}

/// Generates every video. Video i uses scenario seed mix_seed(seed, i); a
/// failed attempt is retried with mix_seed(scenario seed, attempt). Output is
/// independent of `jobs`.
inline std::vector<ManifestRecord> generate_dataset(const GeneratorParams& params, const MotionLibrary& library,
                                                    const GenerateOptions& opt) {
  const auto findings = validate_params(params, library);
  if (!findings.empty()) throw std::invalid_argument("generate_dataset: invalid config: " + findings.front().message);
  if (opt.per_category.has_value() == opt.total.has_value())
    throw std::invalid_argument("generate_dataset: give exactly one of per-category count or total");

  std::vector<std::optional<std::size_t>> forced;
  if (opt.per_category) {
    for (std::size_t a = 0; a < params.action_count(); ++a)
      if (params.theta_A[a] > 0.0)
        for (std::size_t k = 0; k < *opt.per_category; ++k) forced.emplace_back(a);
  } else {
    forced.assign(*opt.total, std::nullopt);
  }
  const std::size_t n = forced.size();
  const bool write = !opt.out_dir.empty();
  if (write) {
    fs::create_directories(opt.out_dir);
    if (opt.write_tracks) fs::create_directories(opt.out_dir / "tracks");
  }

  std::vector<ManifestRecord> records(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        const std::uint64_t base_seed = mix_seed(opt.seed, i);
        Overrides ov;
        ov.action = forced[i];
        std::string last_error;
        bool done = false;
        for (int attempt = 0; attempt < opt.max_attempts && !done; ++attempt) {
          const std::uint64_t seed = attempt == 0 ? base_seed : mix_seed(base_seed, static_cast<std::uint64_t>(attempt));
          try {
            VideoOutput v = realize_scenario(params, library, sample_scenario(params, library, seed, ov));
            v.record.id = video_id(i);
            v.record.index = i;
            if (write && opt.write_tracks) {
              v.record.track_file = "tracks/" + v.record.id + ".csv";
              io::write_text_file(opt.out_dir / v.record.track_file, track_csv(v));
              io::write_text_file(opt.out_dir / "tracks" / (v.record.id + ".violations.csv"),
                                  violations_csv(v.violations));
            }
            records[i] = std::move(v.record);
            done = true;
          } catch (const std::ios_base::failure&) {
            throw;
          } catch (const std::runtime_error& e) {
            last_error = e.what();
          } catch (const std::logic_error& e) {
            last_error = e.what();
          }
        }
        if (!done)
          throw std::runtime_error("video " + video_id(i) + " failed after " + std::to_string(opt.max_attempts) +
                                   " attempts: " + last_error);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };

  const unsigned jobs = std::max(1u, opt.jobs);
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (write) {
    std::string manifest;
    for (const auto& r : records) manifest += io::record_to_json(r).dump() + "\n";
    io::write_text_file(opt.out_dir / "manifest.jsonl", manifest);
  }
  return records;
}

inline std::vector<ManifestRecord> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<ManifestRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("'" + path.string() + "' line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(io::record_from_json(j));
  }
  return out;
}

/// Re-checks the conditional constraints of the scenario model on manifest
/// records. Returns one message per violation.
inline std::vector<std::string> audit_records(const std::vector<ManifestRecord>& records,
                                              const GeneratorParams& params) {
  std::vector<std::string> out;
  std::map<std::string, std::size_t> action_index;
  for (std::size_t a = 0; a < params.actions.size(); ++a) action_index[params.actions[a]] = a;
  std::map<std::string, int> seen_ids;
  for (const auto& r : records) {
    auto bad = [&](const std::string& what) { out.push_back(r.id + ": " + what); };
    if (++seen_ids[r.id] > 1) bad("duplicate id");
    const auto it = action_index.find(r.action);
    if (it == action_index.end()) {
      bad("unknown action '" + r.action + "'");
      continue;
    }
    const std::size_t a = it->second;
    const std::size_t e = index_of(r.environment), c = index_of(r.camera);
    if (r.camera == CameraBehavior::indoors && r.environment != Environment::house)
      bad("indoors camera outside the house");
    if (r.camera == CameraBehavior::closeup && !(params.theta_AC[a][c] > 0.0))
      bad("closeup camera for action '" + r.action + "'");
    if (!(params.theta_AE[a][e] > 0.0)) bad("environment not permitted for the action");
    if (!(camera_weights(params, a, e)[c] > 0.0)) bad("camera not permitted for action and environment");
    const int expected = r.action_class == ActionClass::two_people ? 1 : 0;
    if (r.supporting_actors != expected)
      bad("expected " + std::to_string(expected) + " supporting actors, found " + std::to_string(r.supporting_actors));
    if (r.duration > std::min(r.motion_duration, params.t_max)) bad("duration exceeds min(L_b, T_max)");
    if (r.duration < params.t_min) bad("duration below T_min");
    if (r.frames != frame_count(r.duration, r.fps)) bad("frame count differs from round(L * fps)");
  }
  return out;
}

struct DatasetStats {
  std::size_t clips = 0;
  std::size_t total_frames = 0;
  double total_duration = 0.0;
  double mean_duration = 0.0;
  double min_duration = 0.0;
  double max_duration = 0.0;
  std::map<std::string, std::size_t> per_category;
  std::map<std::string, std::map<std::string, std::size_t>> histograms;  ///< E, W, D, V, C, H
};

inline DatasetStats compute_stats(const std::vector<ManifestRecord>& records) {
  if (records.empty()) throw std::invalid_argument("compute_stats: empty manifest");
  DatasetStats s;
  auto& he = s.histograms["environment"];
  auto& hw = s.histograms["weather"];
  auto& hd = s.histograms["day_phase"];
  auto& hv = s.histograms["variation"];
  auto& hc = s.histograms["camera"];
  auto& hh = s.histograms["human_model"];
  for (std::size_t i = 0; i < kEnvironmentCount; ++i) he[std::string(to_string(static_cast<Environment>(i)))] = 0;
  for (std::size_t i = 0; i < kWeatherCount; ++i) hw[std::string(to_string(static_cast<Weather>(i)))] = 0;
  for (std::size_t i = 0; i < kDayPhaseCount; ++i) hd[std::string(to_string(static_cast<DayPhase>(i)))] = 0;
  for (std::size_t i = 0; i < kVariationCount; ++i) hv[std::string(to_string(static_cast<VariationKind>(i)))] = 0;
  for (std::size_t i = 0; i < kCameraCount; ++i) hc[std::string(to_string(static_cast<CameraBehavior>(i)))] = 0;
  s.min_duration = records.front().duration;
  s.max_duration = records.front().duration;
  for (const auto& r : records) {
    ++s.clips;
    s.total_frames += r.frames;
    s.total_duration += r.duration;
    s.min_duration = std::min(s.min_duration, r.duration);
    s.max_duration = std::max(s.max_duration, r.duration);
    ++s.per_category[r.action];
    ++he[std::string(to_string(r.environment))];
    ++hw[std::string(to_string(r.weather))];
    ++hd[std::string(to_string(r.day_phase))];
    ++hv[std::string(to_string(r.variation))];
    ++hc[std::string(to_string(r.camera))];
    ++hh[r.human_model];
  }
  s.mean_duration = s.total_duration / static_cast<double>(s.clips);
  return s;
}

namespace io {

inline json stats_to_json(const DatasetStats& s) {
  return {{"clips", s.clips},
          {"total_frames", s.total_frames},
          {"total_duration", s.total_duration},
          {"mean_duration", s.mean_duration},
          {"min_duration", s.min_duration},
          {"max_duration", s.max_duration},
          {"per_category", s.per_category},
          {"histograms", s.histograms}};
}

}  // namespace io

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> test;
  bool operator==(const Split&) const = default;
};

/// Stratified splits: per category, a shuffled prefix of
/// min(n - 1, max(1, round(ratio * n))) videos goes to training.
inline std::vector<Split> make_splits(const std::vector<ManifestRecord>& records, double ratio = 0.8,
                                      std::size_t count = 3, std::uint64_t seed = 0) {
  if (records.empty()) throw std::invalid_argument("make_splits: empty manifest");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("make_splits: ratio must lie in (0, 1)");
  std::map<std::string, std::vector<std::string>> by_category;
  for (const auto& r : records) by_category[r.action].push_back(r.id);
  for (auto& [name, ids] : by_category) {
    if (ids.size() < 2)
      throw std::invalid_argument("make_splits: category '" + name + "' has fewer than 2 clips");
    std::sort(ids.begin(), ids.end());
  }
  std::vector<Split> splits;
  for (std::size_t i = 1; i <= count; ++i) {
    RngStream rng(mix_seed(seed, i), "split");
    Split s;
    for (const auto& [name, sorted_ids] : by_category) {
      auto ids = sorted_ids;
      rng.shuffle(std::span<std::string>(ids));
      const std::size_t n = ids.size();
      const auto want = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
      const std::size_t n_train = std::min(n - 1, std::max<std::size_t>(1, want));
      s.train.insert(s.train.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
      s.test.insert(s.test.end(), ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    splits.push_back(std::move(s));
  }
  return splits;
}

/// Writes splits/split<i>_{train,test}.txt under `dir`.
inline void write_splits(const std::vector<Split>& splits, const fs::path& dir) {
  for (std::size_t i = 0; i < splits.size(); ++i) {
    std::string train, test;
    for (const auto& id : splits[i].train) train += id + "\n";
    for (const auto& id : splits[i].test) test += id + "\n";
    const std::string stem = "split" + std::to_string(i + 1);
    io::write_text_file(dir / "splits" / (stem + "_train.txt"), train);
    io::write_text_file(dir / "splits" / (stem + "_test.txt"), test);
  }
}

}  // namespace phav
