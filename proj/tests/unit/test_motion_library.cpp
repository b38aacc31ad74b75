#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "phav/default_library.hpp"
#include "phav/motion.hpp"
#include "test_support.hpp"

using namespace phav;
using phav::testing::constant_clip;

namespace {

const MotionLibrary& lib() {
  static const MotionLibrary l = default_library();
  return l;
}

ActionSpec simple_spec(std::string name, std::vector<std::string> patterns) {
  ActionSpec s;
  s.name = std::move(name);
  s.patterns = std::move(patterns);
  s.critical = {Muscle::upper_arm_r, Muscle::forearm_r, Muscle::hand_r};
  s.complementary = s.critical.complement();
  return s;
}

const std::filesystem::path kTmp = PHAV_TEST_TMP;

}  // namespace

TEST(Library, DefaultShape) {
  EXPECT_EQ(lib().action_count(), 35u);
  EXPECT_GE(lib().clips().size(), 70u);
  std::set<std::string> names;
  for (const auto& s : lib().specs()) names.insert(s.name);
  EXPECT_EQ(names.size(), 35u);
  for (const char* n : {"brush hair", "kick ball", "walking hug", "car hit", "bump into each other", "moonwalk",
                        "walk the line", "golf", "sit", "run"})
    EXPECT_TRUE(names.count(n)) << n;
}

TEST(Library, ClassesAndSupportingActors) {
  std::map<ActionClass, int> per_class;
  for (const auto& s : lib().specs()) {
    ++per_class[s.action_class];
    EXPECT_EQ(s.supporting_actors, s.action_class == ActionClass::two_people ? 1 : 0) << s.name;
    EXPECT_TRUE((s.critical & s.complementary).empty()) << s.name;
    EXPECT_EQ(s.critical | s.complementary, MuscleSet::all()) << s.name;
    EXPECT_FALSE(s.complementary.empty()) << s.name;
  }
  EXPECT_EQ(per_class[ActionClass::sub_hmdb], 21);
  EXPECT_EQ(per_class[ActionClass::one_person], 10);
  EXPECT_EQ(per_class[ActionClass::two_people], 4);
}

TEST(Library, EveryActionHasAdmissibleMotion) {
  for (std::size_t a = 0; a < lib().action_count(); ++a)
    EXPECT_GE(admissible_motions(a, lib(), 1.0).indices().size(), 1u) << lib().specs()[a].name;
}

TEST(Library, EveryClipServesSomeAction) {
  for (std::size_t b = 0; b < lib().clips().size(); ++b) {
    int rows = 0;
    for (std::size_t a = 0; a < lib().action_count(); ++a) rows += lib().matrix()[a][b];
    EXPECT_GE(rows, 1) << lib().clips()[b].id;
  }
}

TEST(Library, ClipsAreWithinLimitsAndSane) {
  for (const auto& c : lib().clips()) {
    EXPECT_GT(c.duration, 0.0);
    for (std::size_t m = 0; m < kMuscleCount; ++m) EXPECT_FALSE(c.tracks[m].empty());
  }
}

TEST(Library, ShortClipIsFilteredByMinimumDuration) {
  const auto wave = *lib().find_action("wave");
  const auto all = admissible_motions(wave, lib(), 0.0).indices();
  const auto filtered = admissible_motions(wave, lib(), 1.0).indices();
  EXPECT_EQ(all.size(), filtered.size() + 1);
  for (auto b : filtered) EXPECT_GE(lib().clips()[b].duration, 1.0);
}

TEST(MotionMatrix, RegexMatchingIsCaseInsensitiveSearch) {
  const std::vector<ActionSpec> specs{simple_spec("wave", {"wav(e|ing)"}), simple_spec("hug", {"^hug", "embrace"}),
                                      simple_spec("kick", {"\\bkick"})};
  const std::vector<MotionClip> clips{constant_clip("a", "Waving Hello", 2.0), constant_clip("b", "hug a friend", 2.0),
                                      constant_clip("c", "warm EMBRACE", 2.0), constant_clip("d", "sidekick", 2.0),
                                      constant_clip("e", "kick the ball", 2.0)};
  const auto m = build_motion_matrix(specs, clips);
  const MotionMatrix expected{{1, 0, 0, 0, 0}, {0, 1, 1, 0, 0}, {0, 0, 0, 0, 1}};
  EXPECT_EQ(m, expected);
}

TEST(MotionMatrix, MalformedPatternNamesTheAction) {
  try {
    build_motion_matrix({simple_spec("broken", {"(unclosed"})}, {constant_clip("a", "x", 1.0)});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("broken"), std::string::npos);
  }
}

TEST(MotionLibraryCtor, RejectsDuplicatesAndBadSpecs) {
  const auto spec = simple_spec("wave", {"wave"});
  EXPECT_THROW(MotionLibrary({spec}, {constant_clip("a", "wave", 1.0), constant_clip("a", "wave", 2.0)}), ParseError);
  auto overlap = spec;
  overlap.complementary.insert(Muscle::hand_r);
  EXPECT_THROW(MotionLibrary({overlap}, {constant_clip("a", "wave", 1.0)}), ParseError);
  auto two = spec;
  two.action_class = ActionClass::two_people;
  EXPECT_THROW(MotionLibrary({two}, {constant_clip("a", "wave", 1.0)}), ParseError);
}

TEST(Clip, MissingChannelNamesClipAndChannel) {
  auto c = constant_clip("clip_x", "wave", 1.0);
  c.track(Muscle::calf_l).clear();
  try {
    c.validate();
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("clip_x"), std::string::npos);
    EXPECT_NE(what.find("calf_l"), std::string::npos);
  }
}

TEST(Clip, InterpolatesLinearlyAndHoldsEnds) {
  MotionClip c = constant_clip("lin", "x", 2.0);
  c.track(Muscle::head) = {{0.0, Vec3(0, 0, 0)}, {1.0, Vec3(10, -20, 30)}, {2.0, Vec3(10, -20, 30)}};
  EXPECT_TRUE(c.rotation_at(Muscle::head, 0.25).isApprox(Vec3(2.5, -5, 7.5)));
  EXPECT_EQ(c.rotation_at(Muscle::head, -1.0), Vec3(0, 0, 0));
  EXPECT_EQ(c.rotation_at(Muscle::head, 5.0), Vec3(10, -20, 30));
  EXPECT_EQ(c.root_at(0.7), Vec3::Zero());
}

TEST(Clip, NonIncreasingKeyTimesRejected) {
  auto c = constant_clip("t", "x", 1.0);
  c.track(Muscle::pelvis) = {{0.0, Vec3::Zero()}, {0.0, Vec3::Zero()}};
  EXPECT_THROW(c.validate(), ParseError);
}

TEST(LibraryJson, RoundTripIsExact) {
  const auto j = io::library_to_json(lib());
  const auto back = io::library_from_json(j);
  EXPECT_EQ(back, lib());
  EXPECT_EQ(back.matrix(), lib().matrix());
}

TEST(LibraryJson, FileRoundTrip) {
  const auto dir = phav::testing::scratch_dir(kTmp, "library_json");
  const MotionLibrary small({simple_spec("wave", {"wave"})}, {constant_clip("a", "wave hello", 1.5)});
  save_library(small, dir / "lib.json");
  EXPECT_EQ(load_library(dir / "lib.json"), small);
  io::write_text_file(dir / "clip.json", io::clip_to_json(small.clips()[0]).dump());
  EXPECT_EQ(load_clip(dir / "clip.json"), small.clips()[0]);
}

TEST(LibraryJson, ErrorsAreTyped) {
  const auto dir = phav::testing::scratch_dir(kTmp, "library_errors");
  io::write_text_file(dir / "empty.json", "");
  io::write_text_file(dir / "bad.json", "{\"actions\": [");
  EXPECT_THROW(load_library(dir / "empty.json"), ParseError);
  EXPECT_THROW(load_library(dir / "bad.json"), ParseError);
  EXPECT_THROW(load_library(dir / "missing.json"), std::runtime_error);

  auto j = io::clip_to_json(constant_clip("c", "x", 1.0));
  j["tracks"].erase("spine");
  try {
    io::clip_from_json(j);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("spine"), std::string::npos);
  }
}

TEST(LibraryJson, WithClipsRebuildsMatrix) {
  const MotionLibrary small({simple_spec("wave", {"wave"})}, {constant_clip("a", "wave hello", 1.5)});
  const auto bigger = small.with_clips({constant_clip("b", "another wave", 3.0), constant_clip("c", "jump", 3.0)});
  EXPECT_EQ(bigger.matrix(), (MotionMatrix{{1, 1, 0}}));
}
