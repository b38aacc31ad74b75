#include <gtest/gtest.h>

#include <cstdlib>
#include <set>
#include <sstream>

#include "phav/default_library.hpp"
#include "phav/generator.hpp"
#include "test_support.hpp"

using namespace phav;
namespace pt = phav::testing;

namespace {

const MotionLibrary& lib() {
  static const MotionLibrary l = default_library();
  return l;
}

const GeneratorParams& params() {
  static const GeneratorParams p = default_params(lib().specs());
  return p;
}

const fs::path kTmp = PHAV_TEST_TMP;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::vector<ManifestRecord> small_dataset(std::size_t per_category, std::uint64_t seed, fs::path out = {},
                                          unsigned jobs = 1) {
  GenerateOptions o;
  o.per_category = per_category;
  o.seed = seed;
  o.out_dir = std::move(out);
  o.jobs = jobs;
  return generate_dataset(params(), lib(), o);
}

}  // namespace

TEST(Generate, PerCategoryCounts) {
  const auto recs = small_dataset(2, 5);
  ASSERT_EQ(recs.size(), 70u);
  std::map<std::string, int> per;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    ++per[recs[i].action];
    ids.insert(recs[i].id);
    EXPECT_EQ(recs[i].index, i);
    EXPECT_EQ(recs[i].id, video_id(i));
    EXPECT_EQ(recs[i].frames, frame_count(recs[i].duration, 30.0));
    EXPECT_EQ(recs[i].seed, mix_seed(5, i));
  }
  EXPECT_EQ(ids.size(), 70u);
  EXPECT_EQ(per.size(), 35u);
  for (const auto& [a, n] : per) EXPECT_EQ(n, 2) << a;
  EXPECT_TRUE(audit_records(recs, params()).empty());
}

TEST(Generate, TotalModeSamplesActions) {
  GenerateOptions o;
  o.total = 25;
  o.seed = 1;
  EXPECT_EQ(generate_dataset(params(), lib(), o).size(), 25u);
  o.per_category = 1;
  EXPECT_THROW(generate_dataset(params(), lib(), o), std::invalid_argument);
  o.per_category.reset();
  o.total.reset();
  EXPECT_THROW(generate_dataset(params(), lib(), o), std::invalid_argument);
}

TEST(Generate, RejectsInvalidConfig) {
  auto p = params();
  std::fill(p.theta_A.begin(), p.theta_A.end(), 0.0);
  GenerateOptions o;
  o.per_category = 1;
  EXPECT_THROW(generate_dataset(p, lib(), o), std::invalid_argument);
}

TEST(Generate, OutputIndependentOfWorkerCount) {
  const auto a = pt::scratch_dir(kTmp, "gen_jobs1");
  const auto b = pt::scratch_dir(kTmp, "gen_jobs3");
  const auto ra = small_dataset(1, 77, a, 1);
  const auto rb = small_dataset(1, 77, b, 3);
  EXPECT_EQ(ra, rb);
  EXPECT_TRUE(pt::same_tree(a, b));
  EXPECT_TRUE(fs::exists(a / "manifest.jsonl"));
  EXPECT_TRUE(fs::exists(a / "tracks" / "v00000.csv"));
  EXPECT_TRUE(fs::exists(a / "tracks" / "v00000.violations.csv"));
}

TEST(Generate, ManifestRoundTrip) {
  const auto dir = pt::scratch_dir(kTmp, "gen_manifest");
  const auto recs = small_dataset(1, 3, dir);
  const auto back = read_manifest(dir / "manifest.jsonl");
  EXPECT_EQ(back, recs);
}

TEST(Generate, TrackCsvIsConsistent) {
  const auto dir = pt::scratch_dir(kTmp, "gen_tracks");
  const auto recs = small_dataset(1, 11, dir);
  const auto& r = recs[3];
  std::stringstream in(pt::slurp(dir / r.track_file));
  std::string line;
  std::getline(in, line);
  const auto header = split_csv(line);
  ASSERT_EQ(header.size(), 7u + 15u * 6u + 4u);
  EXPECT_EQ(header[1], "cam_px");
  EXPECT_EQ(header[7], "j0_wx");
  EXPECT_EQ(header[12], "j0_vis");
  EXPECT_EQ(header.back(), "bbox_y1");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto cells = split_csv(line);
    ASSERT_EQ(cells.size(), header.size());
    ASSERT_EQ(std::stoul(cells[0]), rows);
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    bool any = false;
    for (std::size_t j = 0; j < 15; ++j) {
      const std::size_t base = 7 + j * 6;
      if (cells[base + 5] == "1") {
        any = true;
        x0 = std::min(x0, std::stod(cells[base + 3]));
        x1 = std::max(x1, std::stod(cells[base + 3]));
        y0 = std::min(y0, std::stod(cells[base + 4]));
        y1 = std::max(y1, std::stod(cells[base + 4]));
      }
    }
    const std::size_t b = 7 + 90;
    if (any) {
      EXPECT_NEAR(std::stod(cells[b]), std::clamp(x0, 0.0, 340.0), 2e-6);
      EXPECT_NEAR(std::stod(cells[b + 1]), std::clamp(y0, 0.0, 256.0), 2e-6);
      EXPECT_NEAR(std::stod(cells[b + 2]), std::clamp(x1, 0.0, 340.0), 2e-6);
      EXPECT_NEAR(std::stod(cells[b + 3]), std::clamp(y1, 0.0, 256.0), 2e-6);
    } else {
      EXPECT_EQ(cells[b], "-1.000000");
    }
    ++rows;
  }
  EXPECT_EQ(rows, r.frames);
  std::stringstream vio(pt::slurp(dir / "tracks" / (r.id + ".violations.csv")));
  std::getline(vio, line);
  EXPECT_EQ(line, "muscle,keyframe,axis,overshoot_deg");
  std::size_t vrows = 0;
  while (std::getline(vio, line)) ++vrows;
  EXPECT_EQ(vrows, r.violations);
}

TEST(Generate, RealizedProtagonistIsTrackedByCamera) {
  const auto sc = sample_scenario(params(), lib(), 1234);
  const auto v = realize_scenario(params(), lib(), sc);
  ASSERT_EQ(v.pose.frames.size(), sc.scene.frames);
  ASSERT_EQ(v.camera.frames.size(), sc.scene.frames);
  std::size_t visible_frames = 0;
  for (const auto& b : v.boxes) visible_frames += b.valid;
  EXPECT_GT(visible_frames, sc.scene.frames / 2);
  const auto& joints = lib().find_clip(sc.scene.motion)->skeleton.skeleton().joints;
  for (const auto& f : v.pose.frames)
    for (std::size_t m = 0; m < kMuscleCount; ++m)
      for (std::size_t a = 0; a < 3; ++a)
        ASSERT_TRUE(joints[m].limits[a].contains(f.rotations[m][static_cast<int>(a)]));
}

TEST(Stats, HistogramsSumToClipCount) {
  const auto recs = small_dataset(2, 9);
  const auto s = compute_stats(recs);
  EXPECT_EQ(s.clips, recs.size());
  std::size_t frames = 0;
  double dur = 0.0;
  for (const auto& r : recs) {
    frames += r.frames;
    dur += r.duration;
  }
  EXPECT_EQ(s.total_frames, frames);
  EXPECT_NEAR(s.total_duration, dur, 1e-9);
  EXPECT_NEAR(s.mean_duration, dur / recs.size(), 1e-12);
  for (const char* h : {"environment", "weather", "day_phase", "variation", "camera", "human_model"}) {
    std::size_t total = 0;
    for (const auto& [k, n] : s.histograms.at(h)) total += n;
    EXPECT_EQ(total, recs.size()) << h;
  }
  EXPECT_EQ(s.histograms.at("day_phase").at("night"), 0u);
  EXPECT_THROW(compute_stats({}), std::invalid_argument);
  EXPECT_EQ(io::stats_to_json(s)["clips"], recs.size());
}

TEST(Splits, StratifiedDisjointReproducible) {
  const auto recs = small_dataset(10, 2);
  const auto splits = make_splits(recs, 0.8, 3, 17);
  ASSERT_EQ(splits.size(), 3u);
  std::map<std::string, std::string> action_of;
  for (const auto& r : recs) action_of[r.id] = r.action;
  for (const auto& s : splits) {
    EXPECT_EQ(s.train.size(), 280u);
    EXPECT_EQ(s.test.size(), 70u);
    std::set<std::string> train(s.train.begin(), s.train.end());
    for (const auto& id : s.test) EXPECT_FALSE(train.count(id));
    std::map<std::string, int> per;
    for (const auto& id : s.train) ++per[action_of[id]];
    for (const auto& [a, n] : per) EXPECT_EQ(n, 8) << a;
  }
  EXPECT_NE(splits[0], splits[1]);
  EXPECT_NE(splits[1], splits[2]);
  EXPECT_EQ(make_splits(recs, 0.8, 3, 17), splits);
  EXPECT_NE(make_splits(recs, 0.8, 3, 18), splits);
}

TEST(Splits, SmallCategoriesAndErrors) {
  auto recs = small_dataset(2, 4);
  const auto s = make_splits(recs, 0.8, 1, 0);
  EXPECT_EQ(s[0].train.size(), 35u);
  EXPECT_EQ(s[0].test.size(), 35u);
  recs.pop_back();
  EXPECT_THROW(make_splits(recs, 0.8, 1, 0), std::invalid_argument);
  EXPECT_THROW(make_splits({}, 0.8, 1, 0), std::invalid_argument);
  EXPECT_THROW(make_splits(small_dataset(2, 4), 1.0, 1, 0), std::invalid_argument);
}

TEST(Splits, FilesListSortedIds) {
  const auto dir = pt::scratch_dir(kTmp, "splits_files");
  const auto recs = small_dataset(2, 4);
  write_splits(make_splits(recs), dir);
  for (int i = 1; i <= 3; ++i) {
    for (const char* part : {"train", "test"}) {
      const auto path = dir / "splits" / ("split" + std::to_string(i) + "_" + part + ".txt");
      ASSERT_TRUE(fs::exists(path));
      std::stringstream in(pt::slurp(path));
      std::vector<std::string> ids;
      std::string line;
      while (std::getline(in, line)) ids.push_back(line);
      EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
      EXPECT_FALSE(ids.empty());
    }
  }
}

TEST(Audit, DetectsTamperedRecords) {
  auto recs = small_dataset(1, 6);
  ASSERT_TRUE(audit_records(recs, params()).empty());
  auto find = [&](ActionClass c) {
    return std::find_if(recs.begin(), recs.end(), [c](const ManifestRecord& r) { return r.action_class == c; });
  };
  auto a = recs;
  a[0].camera = CameraBehavior::indoors;
  a[0].environment = Environment::urban;
  EXPECT_FALSE(audit_records(a, params()).empty());
  auto b = recs;
  b[find(ActionClass::two_people) - recs.begin()].supporting_actors = 0;
  EXPECT_FALSE(audit_records(b, params()).empty());
  auto c = recs;
  c[1].duration = c[1].motion_duration + 0.5;
  EXPECT_FALSE(audit_records(c, params()).empty());
  auto d = recs;
  d[2].frames += 1;
  EXPECT_FALSE(audit_records(d, params()).empty());
  auto e = recs;
  e[3].id = e[4].id;
  EXPECT_FALSE(audit_records(e, params()).empty());
  auto f = recs;
  const auto no_closeup = std::find_if(f.begin(), f.end(), [](const ManifestRecord& r) { return r.action == "run"; });
  ASSERT_NE(no_closeup, f.end());
  no_closeup->camera = CameraBehavior::closeup;
  EXPECT_FALSE(audit_records(f, params()).empty());
}

TEST(Manifest, BadLineIsAParseError) {
  const auto dir = pt::scratch_dir(kTmp, "bad_manifest");
  io::write_text_file(dir / "m.jsonl", "{\"id\": \"v1\"}\n");
  EXPECT_THROW(read_manifest(dir / "m.jsonl"), ParseError);
  io::write_text_file(dir / "n.jsonl", "not json\n");
  EXPECT_THROW(read_manifest(dir / "n.jsonl"), ParseError);
  EXPECT_THROW(read_manifest(dir / "missing.jsonl"), std::runtime_error);
}
