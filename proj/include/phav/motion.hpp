#pragma once

// Keyframed base motions, per-action rules and the action x motion
// compatibility matrix built by matching regexes against clip descriptions.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "phav/domain.hpp"
#include "phav/skeleton.hpp"

namespace phav {

using json = nlohmann::json;

/// Raised for malformed clip, library or configuration documents.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RotationKey {
  double time = 0.0;  ///< seconds
  Vec3 euler_deg = Vec3::Zero();
  bool operator==(const RotationKey&) const = default;
};

struct TranslationKey {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
  bool operator==(const TranslationKey&) const = default;
};

/// Periodic displacement of one muscle body on a circle of radius `amplitude`
/// spanned by the orthonormal pair (axis_u, axis_v), in the root frame.
struct Orbit {
  Muscle muscle = Muscle::pelvis;
  double amplitude = 0.0;  ///< m
  double frequency = 0.0;  ///< Hz
  double phase = 0.0;      ///< rad
  Vec3 axis_u = Vec3::UnitX();
  Vec3 axis_v = Vec3::UnitZ();

  Vec3 offset(double t) const {
    const double a = 2.0 * std::numbers::pi * frequency * t + phase;
    return amplitude * (std::cos(a) * axis_u + std::sin(a) * axis_v);
  }
  bool operator==(const Orbit&) const = default;
};

using RotationTrack = std::vector<RotationKey>;

namespace detail {

template <typename Key, typename Value>
Value interpolate_track(const std::vector<Key>& keys, double t, Value Key::*field) {
  if (keys.empty()) return Value::Zero();
  if (t <= keys.front().time) return keys.front().*field;
  if (t >= keys.back().time) return keys.back().*field;
  auto it = std::upper_bound(keys.begin(), keys.end(), t,
                             [](double tt, const Key& k) { return tt < k.time; });
  const Key& hi = *it;
  const Key& lo = *(it - 1);
  const double s = (t - lo.time) / (hi.time - lo.time);
  return (lo.*field) + s * ((hi.*field) - (lo.*field));
}

}  // namespace detail

/// One base motion: a rotation track per muscle plus a root translation track.
/// Tracks are interpolated componentwise-linearly and held constant outside
/// their keyframe span.
struct MotionClip {
  std::string id;
  MotionSource source = MotionSource::mocap;
  std::string description;
  double fps = 10.0;       ///< keyframe rate the clip was authored at
  double duration = 0.0;   ///< seconds
  RagdollSpec skeleton;
  std::array<RotationTrack, kMuscleCount> tracks;
  std::vector<TranslationKey> root;
  std::vector<Orbit> orbits;

  const RotationTrack& track(Muscle m) const { return tracks[static_cast<std::size_t>(m)]; }
  RotationTrack& track(Muscle m) { return tracks[static_cast<std::size_t>(m)]; }

  Vec3 rotation_at(Muscle m, double t) const {
    return detail::interpolate_track(track(m), t, &RotationKey::euler_deg);
  }
  Vec3 root_at(double t) const {
    return detail::interpolate_track(root, t, &TranslationKey::position);
  }

  /// Throws ParseError naming the clip on the first invariant violation.
  void validate() const {
    auto fail = [&](const std::string& what) { throw ParseError("clip '" + id + "': " + what); };
    if (id.empty()) throw ParseError("clip without id");
    if (!(duration > 0.0) || !std::isfinite(duration)) fail("duration must be positive");
    if (!(fps > 0.0) || !std::isfinite(fps)) fail("fps must be positive");
    for (std::size_t m = 0; m < kMuscleCount; ++m) {
      const auto& tr = tracks[m];
      if (tr.empty()) fail("missing muscle channel '" + std::string(kMuscleNames[m]) + "'");
      for (std::size_t k = 1; k < tr.size(); ++k)
        if (!(tr[k].time > tr[k - 1].time))
          fail("keyframe times of '" + std::string(kMuscleNames[m]) +
               "' are not strictly increasing");
      for (const auto& key : tr)
        if (!std::isfinite(key.time) || !key.euler_deg.allFinite())
          fail("non-finite keyframe on '" + std::string(kMuscleNames[m]) + "'");
    }
    for (std::size_t k = 1; k < root.size(); ++k)
      if (!(root[k].time > root[k - 1].time))
        fail("root keyframe times are not strictly increasing");
  }

  bool operator==(const MotionClip&) const = default;
};

enum class ObjectMode { none, dynamic, fixture };

/// How an action interacts with objects: a spawned object attached to a
/// muscle, or a fixture in the world the protagonist is moved next to.
struct ObjectProtocol {
  ObjectMode mode = ObjectMode::none;
  std::string kind;                ///< "ball", "bench", ...
  Muscle attach = Muscle::hand_r;  ///< dynamic objects only

  bool operator==(const ObjectProtocol&) const = default;
};

struct ActionSpec {
  std::string name;
  ActionClass action_class = ActionClass::sub_hmdb;
  std::vector<std::string> patterns;  ///< case-insensitive, matched anywhere in descriptions
  MuscleSet critical;
  MuscleSet complementary;
  ObjectProtocol object;
  int supporting_actors = 0;
  Vec3 supporting_offset = Vec3::Zero();  ///< protagonist frame, meters
  double supporting_heading_deg = 0.0;    ///< relative to the protagonist
  bool scripted_event = false;            ///< e.g. a collision at a sampled instant

  void validate() const {
    auto fail = [&](const std::string& what) {
      throw ParseError("action '" + name + "': " + what);
    };
    if (name.empty()) throw ParseError("action without name");
    if (!(critical & complementary).empty()) fail("critical and complementary muscles overlap");
    if ((critical | complementary) != MuscleSet::all())
      fail("critical and complementary muscles must cover all 15 muscles");
    const int expected = action_class == ActionClass::two_people ? 1 : 0;
    if (supporting_actors != expected)
      fail("supporting actor count must be " + std::to_string(expected) + " for class " +
           std::string(to_string(action_class)));
    if (patterns.empty()) fail("no motion patterns");
  }

  bool operator==(const ActionSpec&) const = default;
};

/// theta_AB: rows are actions, columns are clips, entries 0 or 1.
using MotionMatrix = std::vector<std::vector<std::uint8_t>>;

inline MotionMatrix build_motion_matrix(const std::vector<ActionSpec>& specs,
                                        const std::vector<MotionClip>& clips) {
  if (specs.empty()) throw std::invalid_argument("build_motion_matrix: no actions");
  if (clips.empty()) throw std::invalid_argument("build_motion_matrix: no clips");
  MotionMatrix m(specs.size(), std::vector<std::uint8_t>(clips.size(), 0));
  for (std::size_t a = 0; a < specs.size(); ++a) {
    std::vector<std::regex> compiled;
    for (const auto& pattern : specs[a].patterns) {
      try {
        compiled.emplace_back(pattern, std::regex::ECMAScript | std::regex::icase);
      } catch (const std::regex_error& e) {
        throw ParseError("action '" + specs[a].name + "': malformed pattern '" + pattern +
                         "': " + e.what());
      }
    }
    for (std::size_t b = 0; b < clips.size(); ++b)
      for (const auto& re : compiled)
        if (std::regex_search(clips[b].description, re)) {
          m[a][b] = 1;
          break;
        }
  }
  return m;
}

/// Clip weights for one action after duration filtering. Entries are 1 for
/// admissible clips and 0 otherwise; all-zero is a valid result.
struct WeightedClips {
  std::vector<double> weights;

  bool empty() const {
    return std::none_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; });
  }
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (weights[i] > 0.0) out.push_back(i);
    return out;
  }
};

class MotionLibrary {
 public:
  MotionLibrary() = default;

  MotionLibrary(std::vector<ActionSpec> specs, std::vector<MotionClip> clips)
      : specs_(std::move(specs)), clips_(std::move(clips)) {
    for (const auto& s : specs_) s.validate();
    for (const auto& c : clips_) c.validate();
    for (std::size_t i = 0; i < clips_.size(); ++i)
      for (std::size_t j = i + 1; j < clips_.size(); ++j)
        if (clips_[i].id == clips_[j].id) throw ParseError("duplicate clip id '" + clips_[i].id + "'");
    matrix_ = build_motion_matrix(specs_, clips_);
  }

  const std::vector<ActionSpec>& specs() const noexcept { return specs_; }
  const std::vector<MotionClip>& clips() const noexcept { return clips_; }
  const MotionMatrix& matrix() const noexcept { return matrix_; }

  std::size_t action_count() const noexcept { return specs_.size(); }

  std::optional<std::size_t> find_action(std::string_view name) const {
    for (std::size_t i = 0; i < specs_.size(); ++i)
      if (specs_[i].name == name) return i;
    return std::nullopt;
  }
  const MotionClip* find_clip(std::string_view id) const {
    for (const auto& c : clips_)
      if (c.id == id) return &c;
    return nullptr;
  }
  std::optional<std::size_t> clip_index(std::string_view id) const {
    for (std::size_t i = 0; i < clips_.size(); ++i)
      if (clips_[i].id == id) return i;
    return std::nullopt;
  }

  /// A new library with extra clips appended; theta_AB is rebuilt.
  MotionLibrary with_clips(std::vector<MotionClip> more) const {
    auto clips = clips_;
    for (auto& c : more) clips.push_back(std::move(c));
    return MotionLibrary(specs_, std::move(clips));
  }

  bool operator==(const MotionLibrary& o) const { return specs_ == o.specs_ && clips_ == o.clips_; }

 private:
  std::vector<ActionSpec> specs_;
  std::vector<MotionClip> clips_;
  MotionMatrix matrix_;
};

inline WeightedClips admissible_motions(std::size_t action, const MotionLibrary& library,
                                        double t_min) {
  if (action >= library.action_count())
    throw std::out_of_range("admissible_motions: action index out of range");
  WeightedClips out;
  out.weights.assign(library.clips().size(), 0.0);
  const auto& row = library.matrix()[action];
  for (std::size_t b = 0; b < row.size(); ++b)
    if (row[b] && library.clips()[b].duration >= t_min) out.weights[b] = 1.0;
  return out;
}

inline WeightedClips admissible_motions(const ActionSpec& action, const MotionLibrary& library,
                                        double t_min) {
  auto idx = library.find_action(action.name);
  if (!idx) throw std::invalid_argument("admissible_motions: unknown action '" + action.name + "'");
  return admissible_motions(*idx, library, t_min);
}

// ---------------------------------------------------------------------------
// JSON

namespace io {

inline json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

inline Vec3 vec_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ParseError(what + ": expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json muscle_set_to_json(MuscleSet s) {
  json out = json::array();
  for (auto m : s.members()) out.push_back(std::string(to_string(m)));
  return out;
}

inline Muscle muscle_from_json(const json& j, const std::string& context) {
  const auto name = j.get<std::string>();
  auto m = muscle_from_name(name);
  if (!m) throw ParseError(context + ": unknown muscle '" + name + "'");
  return *m;
}

inline MuscleSet muscle_set_from_json(const json& j, const std::string& context) {
  MuscleSet s;
  for (const auto& e : j) s.insert(muscle_from_json(e, context));
  return s;
}

inline json skeleton_to_json(const Skeleton& s) {
  json muscles = json::array();
  for (const auto& jt : s.joints) {
    json limits = json::array();
    for (const auto& r : jt.limits) limits.push_back(json::array({r.lo, r.hi}));
    muscles.push_back({{"name", jt.name},
                       {"parent", jt.parent},
                       {"offset", vec_to_json(jt.offset)},
                       {"limits", limits},
                       {"rest", vec_to_json(jt.rest)},
                       {"strength", jt.strength}});
  }
  return {{"muscles", muscles}};
}

inline Skeleton skeleton_from_json(const json& j, const std::string& context) {
  Skeleton s;
  if (!j.contains("muscles") || !j["muscles"].is_array())
    throw ParseError(context + ": skeleton without muscles");
  for (const auto& m : j["muscles"]) {
    Joint jt;
    jt.name = m.at("name").get<std::string>();
    jt.parent = m.at("parent").get<int>();
    jt.offset = vec_from_json(m.at("offset"), context + " offset");
    const auto& lim = m.at("limits");
    if (!lim.is_array() || lim.size() != 3) throw ParseError(context + ": limits need 3 axes");
    for (std::size_t a = 0; a < 3; ++a)
      jt.limits[a] = Range{lim[a].at(0).get<double>(), lim[a].at(1).get<double>()};
    if (m.contains("rest")) jt.rest = vec_from_json(m["rest"], context + " rest");
    jt.strength = m.value("strength", 1.0);
    s.joints.push_back(std::move(jt));
  }
  return s;
}

inline json clip_to_json(const MotionClip& c) {
  json tracks = json::object();
  for (std::size_t m = 0; m < kMuscleCount; ++m) {
    json keys = json::array();
    for (const auto& k : c.tracks[m])
      keys.push_back(json::array({k.time, k.euler_deg.x(), k.euler_deg.y(), k.euler_deg.z()}));
    tracks[std::string(kMuscleNames[m])] = std::move(keys);
  }
  json root = json::array();
  for (const auto& k : c.root)
    root.push_back(json::array({k.time, k.position.x(), k.position.y(), k.position.z()}));
  json out = {{"id", c.id},
              {"source", std::string(to_string(c.source))},
              {"description", c.description},
              {"fps", c.fps},
              {"duration", c.duration},
              {"skeleton", skeleton_to_json(c.skeleton.skeleton())},
              {"tracks", std::move(tracks)},
              {"root", std::move(root)}};
  if (!c.orbits.empty()) {
    json orbits = json::array();
    for (const auto& o : c.orbits)
      orbits.push_back({{"muscle", std::string(to_string(o.muscle))},
                        {"amplitude", o.amplitude},
                        {"frequency", o.frequency},
                        {"phase", o.phase},
                        {"u", vec_to_json(o.axis_u)},
                        {"v", vec_to_json(o.axis_v)}});
    out["orbits"] = std::move(orbits);
  }
  return out;
}

inline MotionClip clip_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("clip: expected a JSON object");
  MotionClip c;
  c.id = j.value("id", std::string{});
  if (c.id.empty()) throw ParseError("clip without id");
  const std::string ctx = "clip '" + c.id + "'";
  try {
    c.source = parse_enum<MotionSource>(j.at("source").get<std::string>());
    c.description = j.at("description").get<std::string>();
    c.fps = j.at("fps").get<double>();
    c.duration = j.at("duration").get<double>();
    try {
      c.skeleton = RagdollSpec(skeleton_from_json(j.at("skeleton"), ctx));
    } catch (const std::invalid_argument& e) {
      throw ParseError(ctx + ": " + e.what());
    }
    const auto& tracks = j.at("tracks");
    if (!tracks.is_object()) throw ParseError(ctx + ": tracks must be an object");
    std::array<bool, kMuscleCount> seen{};
    for (const auto& [name, keys] : tracks.items()) {
      auto m = muscle_from_name(name);
      if (!m) throw ParseError(ctx + ": unknown muscle '" + name + "'");
      auto& tr = c.track(*m);
      seen[static_cast<std::size_t>(*m)] = true;
      for (const auto& k : keys) {
        if (!k.is_array() || k.size() != 4)
          throw ParseError(ctx + ": keyframes of '" + name + "' must be [t, x, y, z]");
        tr.push_back({k[0].get<double>(), Vec3(k[1].get<double>(), k[2].get<double>(),
                                               k[3].get<double>())});
      }
    }
    for (std::size_t m = 0; m < kMuscleCount; ++m)
      if (!seen[m]) throw ParseError(ctx + ": missing muscle channel '" +
                                     std::string(kMuscleNames[m]) + "'");
    for (const auto& k : j.value("root", json::array())) {
      if (!k.is_array() || k.size() != 4)
        throw ParseError(ctx + ": root keyframes must be [t, x, y, z]");
      c.root.push_back(
          {k[0].get<double>(), Vec3(k[1].get<double>(), k[2].get<double>(), k[3].get<double>())});
    }
    for (const auto& o : j.value("orbits", json::array())) {
      Orbit orb;
      orb.muscle = muscle_from_json(o.at("muscle"), ctx);
      orb.amplitude = o.at("amplitude").get<double>();
      orb.frequency = o.at("frequency").get<double>();
      orb.phase = o.at("phase").get<double>();
      orb.axis_u = vec_from_json(o.at("u"), ctx);
      orb.axis_v = vec_from_json(o.at("v"), ctx);
      c.orbits.push_back(orb);
    }
  } catch (const json::exception& e) {
    throw ParseError(ctx + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(ctx + ": " + e.what());
  }
  c.validate();
  return c;
}

inline json object_protocol_to_json(const ObjectProtocol& p) {
  switch (p.mode) {
    case ObjectMode::none: return {{"mode", "none"}};
    case ObjectMode::dynamic:
      return {{"mode", "dynamic"}, {"kind", p.kind}, {"attach", std::string(to_string(p.attach))}};
    case ObjectMode::fixture: return {{"mode", "static"}, {"kind", p.kind}};
  }
  return {};
}

inline ObjectProtocol object_protocol_from_json(const json& j, const std::string& ctx) {
  ObjectProtocol p;
  const auto mode = j.value("mode", std::string("none"));
  if (mode == "none") return p;
  p.kind = j.at("kind").get<std::string>();
  if (mode == "dynamic") {
    p.mode = ObjectMode::dynamic;
    p.attach = muscle_from_json(j.at("attach"), ctx);
  } else if (mode == "static") {
    p.mode = ObjectMode::fixture;
  } else {
    throw ParseError(ctx + ": unknown object mode '" + mode + "'");
  }
  return p;
}

inline json action_to_json(const ActionSpec& a) {
  return {{"name", a.name},
          {"class", std::string(to_string(a.action_class))},
          {"patterns", a.patterns},
          {"critical", muscle_set_to_json(a.critical)},
          {"complementary", muscle_set_to_json(a.complementary)},
          {"object", object_protocol_to_json(a.object)},
          {"supporting_actors", a.supporting_actors},
          {"supporting_offset", vec_to_json(a.supporting_offset)},
          {"supporting_heading", a.supporting_heading_deg},
          {"scripted_event", a.scripted_event}};
}

inline ActionSpec action_from_json(const json& j) {
  ActionSpec a;
  a.name = j.value("name", std::string{});
  const std::string ctx = "action '" + a.name + "'";
  try {
    a.action_class = parse_enum<ActionClass>(j.at("class").get<std::string>());
    a.patterns = j.at("patterns").get<std::vector<std::string>>();
    a.critical = muscle_set_from_json(j.at("critical"), ctx);
    a.complementary = j.contains("complementary")
                          ? muscle_set_from_json(j["complementary"], ctx)
                          : a.critical.complement();
    a.object = object_protocol_from_json(j.value("object", json::object()), ctx);
    a.supporting_actors = j.value("supporting_actors", 0);
    if (j.contains("supporting_offset"))
      a.supporting_offset = vec_from_json(j["supporting_offset"], ctx);
    a.supporting_heading_deg = j.value("supporting_heading", 0.0);
    a.scripted_event = j.value("scripted_event", false);
  } catch (const json::exception& e) {
    throw ParseError(ctx + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(ctx + ": " + e.what());
  }
  a.validate();
  return a;
}

inline json library_to_json(const MotionLibrary& lib) {
  json actions = json::array();
  for (const auto& a : lib.specs()) actions.push_back(action_to_json(a));
  json clips = json::array();
  for (const auto& c : lib.clips()) clips.push_back(clip_to_json(c));
  return {{"format", "phav-motion-library"}, {"version", 1}, {"actions", actions}, {"clips", clips}};
}

inline MotionLibrary library_from_json(const json& j) {
  if (!j.is_object() || !j.contains("actions") || !j.contains("clips"))
    throw ParseError("library: expected an object with 'actions' and 'clips'");
  std::vector<ActionSpec> specs;
  for (const auto& a : j["actions"]) specs.push_back(action_from_json(a));
  std::vector<MotionClip> clips;
  for (const auto& c : j["clips"]) clips.push_back(clip_from_json(c));
  try {
    return MotionLibrary(std::move(specs), std::move(clips));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("library: ") + e.what());
  }
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw ParseError("'" + path.string() + "' is empty");
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace io

inline MotionLibrary load_library(const std::filesystem::path& path) {
  return io::library_from_json(io::read_json_file(path));
}

inline void save_library(const MotionLibrary& lib, const std::filesystem::path& path) {
  io::write_text_file(path, io::library_to_json(lib).dump(1) + "\n");
}

/// Imports a single clip file (the clip schema on its own).
inline MotionClip load_clip(const std::filesystem::path& path) {
  return io::clip_from_json(io::read_json_file(path));
}

}  // namespace phav
