#pragma once

// Ancestral sampling of one complete video scenario: world (day phase, clock
// time, weather), human model, and the scene (action, environment, camera,
// base motion, duration, variation, placements).

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "phav/distributions.hpp"
#include "phav/domain.hpp"
#include "phav/kite_camera.hpp"
#include "phav/motion.hpp"
#include "phav/params.hpp"
#include "phav/variation.hpp"

namespace phav {

struct WeatherElements {
  bool clouds = false;
  double cloud_cover = 0.0;  ///< [0, 1] when clouds
  bool rain_particles = false;
  double rain_intensity = 0.0;
  bool wet_ground = false;
  bool puddles = false;
  bool fog = false;
  double fog_density = 0.0;
  bool operator==(const WeatherElements&) const = default;
};

struct SunState {
  double elevation_deg = 0.0;
  double azimuth_deg = 0.0;
  double brightness = 0.0;  ///< [0, 1]
  bool operator==(const SunState&) const = default;
};

struct WorldState {
  DayPhase phase = DayPhase::day;
  double clock_time = 12.0;  ///< hours in [0, 24)
  Weather weather = Weather::clear;
  WeatherElements elements;
  SunState sun;
  bool operator==(const WorldState&) const = default;
};

struct Placement {
  Vec3 position = Vec3::Zero();
  double heading_deg = 0.0;
  int waypoint = -1;  ///< node index in the protagonist graph, -1 if not on a node
  bool operator==(const Placement&) const = default;
};

struct BackgroundActor {
  std::string human_model;
  int start = 0;
  int destination = 0;
  Vec3 start_position = Vec3::Zero();
  Vec3 destination_position = Vec3::Zero();
  bool operator==(const BackgroundActor&) const = default;
};

struct SceneFragment {
  std::size_t action = 0;
  Environment environment = Environment::urban;
  CameraBehavior camera = CameraBehavior::kite;
  std::string motion;  ///< base clip id
  double motion_duration = 0.0;
  double duration = 0.0;
  std::size_t frames = 0;
  VariationKind variation = VariationKind::none;
  VariationPlan plan;
  RigParams rig;
  Placement protagonist;
  std::vector<Placement> supporting;
  std::vector<BackgroundActor> background;
  std::optional<double> event_time;  ///< scripted collision instant, seconds
  bool operator==(const SceneFragment&) const = default;
};

struct ScenarioDescriptor {
  std::uint64_t seed = 0;
  std::size_t human = 0;
  std::string human_model;
  std::string action_name;
  ActionClass action_class = ActionClass::sub_hmdb;
  WorldState world;
  SceneFragment scene;
  bool operator==(const ScenarioDescriptor&) const = default;
};

/// Values that replace sampled ones, e.g. to generate a fixed number of videos
/// per category.
struct Overrides {
  std::optional<std::size_t> action;
  std::optional<DayPhase> phase;
};

// ---------------------------------------------------------------------------
// World

inline SunState sun_for(double clock_time, Weather w) {
  SunState s;
  s.elevation_deg = 60.0 * std::sin(std::numbers::pi * (clock_time - 6.0) / 12.0);
  s.azimuth_deg = std::fmod(90.0 + 15.0 * (clock_time - 6.0) + 720.0, 360.0);
  const double factor = w == Weather::clear ? 1.0 : w == Weather::overcast ? 0.5 : w == Weather::rain ? 0.3 : 0.4;
  s.brightness = std::max(0.0, std::sin(deg2rad(s.elevation_deg))) * factor;
  return s;
}

/// Weather elements, parent flag first; each dependent flag is one Bernoulli.
inline WeatherElements sample_weather_elements(Weather w, double p, RngStream& rng) {
  WeatherElements e;
  switch (w) {
    case Weather::clear:
      e.clouds = bernoulli_sample(p, rng);
      break;
    case Weather::overcast:
      e.clouds = true;
      e.wet_ground = bernoulli_sample(p, rng);
      break;
    case Weather::rain:
      e.clouds = true;
      e.rain_particles = true;
      e.wet_ground = true;
      e.puddles = bernoulli_sample(p, rng);
      break;
    case Weather::fog:
      e.fog = true;
      e.clouds = bernoulli_sample(p, rng);
      if (e.clouds) e.wet_ground = bernoulli_sample(p, rng);
      break;
  }
  if (e.clouds) e.cloud_cover = rng.uniform01();
  if (e.rain_particles) e.rain_intensity = rng.uniform01();
  if (e.fog) e.fog_density = rng.uniform01();
  return e;
}

inline WorldState sample_world(const GeneratorParams& params, RngStream& rng,
                               std::optional<DayPhase> forced_phase = std::nullopt) {
  WorldState w;
  RngStream rd = rng.fork("phase");
  RngStream rt = rng.fork("clock");
  RngStream rw = rng.fork("weather");
  RngStream re = rng.fork("elements");
  w.phase = forced_phase ? *forced_phase
                         : static_cast<DayPhase>(categorical_sample(CategoricalWeights(params.theta_D), rd));
  const double t = triangular_sample(params.clock_time.at(index_of(w.phase)), rt);
  w.clock_time = std::fmod(t, 24.0);
  w.weather = static_cast<Weather>(categorical_sample(CategoricalWeights(params.theta_W), rw));
  w.elements = sample_weather_elements(w.weather, params.weather_element_probability, re);
  w.sun = sun_for(w.clock_time, w.weather);
  return w;
}

/// Whether clock time `t` (hours, [0, 24)) lies in the support of the phase's
/// triangular, allowing supports that wrap past midnight.
inline bool clock_time_in_support(const GeneratorParams& params, DayPhase d, double t) {
  const auto& tri = params.clock_time.at(index_of(d));
  for (double shift : {0.0, 24.0})
    if (t + shift >= tri.lower() && t + shift <= tri.upper()) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Scene

/// Duration law: L ~ Tr(T_min, min(L_b, T_max), min(T_mod, L_b)).
inline double sample_duration(const GeneratorParams& p, double clip_duration, RngStream& rng) {
  const double b = std::min(clip_duration, p.t_max);
  const double c = std::min(p.t_mod, clip_duration);
  if (!(b > p.t_min)) return p.t_min;
  return triangular_sample(TriangularParams(p.t_min, b, std::clamp(c, p.t_min, b)), rng);
}

inline std::size_t frame_count(double duration, double fps) {
  return static_cast<std::size_t>(std::llround(duration * fps));
}

namespace detail {

inline Vec3 rotate_heading(const Vec3& v, double heading_deg) { return heading_matrix(heading_deg) * v; }

}  // namespace detail

inline SceneFragment sample_scene(const GeneratorParams& params, const WorldState& world,
                                  const MotionLibrary& library, RngStream& rng,
                                  const Overrides& overrides = {}) {
  (void)world;
  if (library.clips().empty()) throw std::invalid_argument("sample_scene: empty motion library");
  if (library.action_count() != params.action_count())
    throw std::invalid_argument("sample_scene: library and config disagree on the action set");
  SceneFragment s;
  RngStream ra = rng.fork("action");
  RngStream renv = rng.fork("environment");
  RngStream rc = rng.fork("camera");
  RngStream rb = rng.fork("motion");
  RngStream rl = rng.fork("duration");
  RngStream rv = rng.fork("variation");
  RngStream rr = rng.fork("rig");
  RngStream rp = rng.fork("placement");

  s.action = overrides.action ? *overrides.action : categorical_sample(CategoricalWeights(params.theta_A), ra);
  if (s.action >= library.action_count()) throw std::out_of_range("sample_scene: action index out of range");
  const ActionSpec& spec = library.specs()[s.action];

  s.environment = static_cast<Environment>(categorical_sample(CategoricalWeights(params.theta_AE[s.action]), renv));
  const auto cw = camera_weights(params, s.action, index_of(s.environment));
  if (std::none_of(cw.begin(), cw.end(), [](double w) { return w > 0.0; }))
    throw std::runtime_error("sample_scene: no camera compatible with action '" + spec.name +
                             "' in environment '" + std::string(to_string(s.environment)) + "'");
  s.camera = static_cast<CameraBehavior>(categorical_sample(CategoricalWeights(cw), rc));

  const auto admissible = admissible_motions(s.action, library, params.t_min);
  if (admissible.empty())
    throw std::runtime_error("sample_scene: no admissible motion for action '" + spec.name + "'");
  const MotionClip& clip = library.clips()[categorical_sample(CategoricalWeights(admissible.weights), rb)];
  s.motion = clip.id;
  s.motion_duration = clip.duration;
  s.duration = sample_duration(params, clip.duration, rl);
  s.frames = frame_count(s.duration, params.fps);

  s.variation = static_cast<VariationKind>(categorical_sample(CategoricalWeights(variation_weights(params, spec)), rv));
  s.plan = plan_variation(spec, s.variation, rv, &library, clip.id, params.variation);

  s.rig = sample_rig(s.camera, rr, params.camera);

  const EnvironmentConfig& env = params.environments.at(index_of(s.environment));
  const auto node = static_cast<int>(rp.uniform_index(env.protagonist.nodes.size()));
  s.protagonist.waypoint = node;
  s.protagonist.position = env.protagonist.nodes[static_cast<std::size_t>(node)];
  s.protagonist.heading_deg = rp.uniform(0.0, 360.0);
  if (s.plan.object && s.plan.object->mode == ObjectMode::fixture) {
    std::vector<const Fixture*> candidates;
    for (const auto& f : env.fixtures)
      if (f.kind == s.plan.object->kind) candidates.push_back(&f);
    if (candidates.empty())
      throw std::runtime_error("sample_scene: no '" + s.plan.object->kind + "' fixture in environment '" +
                               std::string(to_string(s.environment)) + "'");
    const Fixture& f = *candidates[rp.uniform_index(candidates.size())];
    s.protagonist.heading_deg = f.heading_deg;
    s.protagonist.position = f.position - detail::rotate_heading(Vec3(0.0, 0.0, 0.6), f.heading_deg);
    s.protagonist.waypoint = -1;
  }

  for (int k = 0; k < spec.supporting_actors; ++k) {
    Placement sp;
    sp.position = s.protagonist.position + detail::rotate_heading(spec.supporting_offset, s.protagonist.heading_deg);
    sp.heading_deg = std::fmod(s.protagonist.heading_deg + spec.supporting_heading_deg, 360.0);
    s.supporting.push_back(sp);
  }

  if (!env.indoor && !env.background.nodes.empty() && params.max_background_actors > 0) {
    const auto count = rp.uniform_int(0, params.max_background_actors);
    for (std::int64_t k = 0; k < count; ++k) {
      BackgroundActor a;
      a.human_model = params.human_models[categorical_sample(CategoricalWeights(params.theta_H), rp)];
      a.start = static_cast<int>(rp.uniform_index(env.background.nodes.size()));
      const auto nb = env.background.neighbours(a.start);
      a.destination = nb.empty() ? a.start : nb[rp.uniform_index(nb.size())];
      a.start_position = env.background.nodes[static_cast<std::size_t>(a.start)];
      a.destination_position = env.background.nodes[static_cast<std::size_t>(a.destination)];
      s.background.push_back(a);
    }
  }

  if (spec.scripted_event) s.event_time = rp.uniform(0.3 * s.duration, 0.7 * s.duration);
  return s;
}

/// Composes world, human and scene draws from independent sub-streams of
/// `seed`; deterministic in (params, library, seed, overrides).
inline ScenarioDescriptor sample_scenario(const GeneratorParams& params, const MotionLibrary& library,
                                          std::uint64_t seed, const Overrides& overrides = {}) {
  ScenarioDescriptor d;
  d.seed = seed;
  const RngStream root(seed, "scenario");
  RngStream rw = root.fork("world");
  RngStream rh = root.fork("human");
  RngStream rs = root.fork("scene");
  d.world = sample_world(params, rw, overrides.phase);
  d.human = categorical_sample(CategoricalWeights(params.theta_H), rh);
  d.human_model = params.human_models.at(d.human);
  d.scene = sample_scene(params, d.world, library, rs, overrides);
  const auto& spec = library.specs()[d.scene.action];
  d.action_name = spec.name;
  d.action_class = spec.action_class;
  return d;
}

// ---------------------------------------------------------------------------
// JSON

namespace io {

inline json world_to_json(const WorldState& w) {
  const auto& e = w.elements;
  return {{"day_phase", std::string(to_string(w.phase))},
          {"clock_time", w.clock_time},
          {"weather", std::string(to_string(w.weather))},
          {"elements",
           {{"clouds", e.clouds},
            {"cloud_cover", e.cloud_cover},
            {"rain_particles", e.rain_particles},
            {"rain_intensity", e.rain_intensity},
            {"wet_ground", e.wet_ground},
            {"puddles", e.puddles},
            {"fog", e.fog},
            {"fog_density", e.fog_density}}},
          {"sun", {{"elevation_deg", w.sun.elevation_deg}, {"azimuth_deg", w.sun.azimuth_deg}, {"brightness", w.sun.brightness}}}};
}

inline WorldState world_from_json(const json& j) {
  WorldState w;
  w.phase = parse_enum<DayPhase>(j.at("day_phase").get<std::string>());
  w.clock_time = j.at("clock_time").get<double>();
  w.weather = parse_enum<Weather>(j.at("weather").get<std::string>());
  const auto& e = j.at("elements");
  w.elements.clouds = e.at("clouds").get<bool>();
  w.elements.cloud_cover = e.at("cloud_cover").get<double>();
  w.elements.rain_particles = e.at("rain_particles").get<bool>();
  w.elements.rain_intensity = e.at("rain_intensity").get<double>();
  w.elements.wet_ground = e.at("wet_ground").get<bool>();
  w.elements.puddles = e.at("puddles").get<bool>();
  w.elements.fog = e.at("fog").get<bool>();
  w.elements.fog_density = e.at("fog_density").get<double>();
  const auto& s = j.at("sun");
  w.sun = {s.at("elevation_deg").get<double>(), s.at("azimuth_deg").get<double>(), s.at("brightness").get<double>()};
  return w;
}

inline json placement_to_json(const Placement& p) {
  return {{"position", vec_to_json(p.position)}, {"heading_deg", p.heading_deg}, {"waypoint", p.waypoint}};
}

inline Placement placement_from_json(const json& j) {
  return {vec_from_json(j.at("position"), "placement"), j.at("heading_deg").get<double>(), j.value("waypoint", -1)};
}

}  // namespace io

}  // namespace phav
