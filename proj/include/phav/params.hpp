#pragma once

// The full parameter set of the scenario model: categorical tables,
// conditional compatibility tables, duration bounds, output format and the
// per-environment placement data.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phav/default_library.hpp"
#include "phav/distributions.hpp"
#include "phav/domain.hpp"
#include "phav/kite_camera.hpp"
#include "phav/motion.hpp"
#include "phav/variation.hpp"

namespace phav {

struct WaypointGraph {
  std::vector<Vec3> nodes;
  std::vector<std::pair<int, int>> edges;  ///< undirected

  std::vector<int> neighbours(int node) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges) {
      if (a == node) out.push_back(b);
      if (b == node) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  bool operator==(const WaypointGraph&) const = default;
};

struct Fixture {
  std::string kind;  ///< "stairs", "bench", "bar", ...
  Vec3 position = Vec3::Zero();
  double heading_deg = 0.0;  ///< direction an actor using it faces
  bool operator==(const Fixture&) const = default;
};

struct EnvironmentConfig {
  bool indoor = false;
  WaypointGraph protagonist;  ///< candidate protagonist positions
  WaypointGraph background;   ///< pedestrian graph; empty indoors
  std::vector<Fixture> fixtures;
  bool operator==(const EnvironmentConfig&) const = default;
};

struct GeneratorParams {
  std::vector<std::string> actions;       ///< action names, rows of the action tables
  std::vector<std::string> human_models;  ///< H domain
  std::vector<double> theta_A;            ///< per action
  std::vector<double> theta_H;            ///< per human model
  std::vector<double> theta_W;            ///< clear, overcast, rain, fog
  std::vector<double> theta_D;            ///< dawn, day, dusk, night
  std::vector<double> theta_V;            ///< none, perturbation, weakening, objects, blending
  std::vector<double> theta_C;            ///< kite, closeup, indoors, static
  std::vector<std::vector<double>> theta_AE;  ///< action x environment
  std::vector<std::vector<double>> theta_AC;  ///< action x camera
  std::vector<std::vector<double>> theta_CE;  ///< camera x environment
  double t_min = 1.0;   ///< s
  double t_max = 10.0;  ///< s
  double t_mod = 5.0;   ///< s
  double fps = 30.0;
  int width = 340;
  int height = 256;
  double vertical_fov_deg = 60.0;
  std::vector<TriangularParams> clock_time;  ///< per day phase, hours; night may exceed 24
  double weather_element_probability = 0.5;
  int max_background_actors = 4;
  std::vector<EnvironmentConfig> environments;  ///< indexed by Environment
  VariationRanges variation;
  RigRanges camera;

  std::size_t action_count() const { return actions.size(); }
  Intrinsics intrinsics() const { return {vertical_fov_deg, width, height}; }
  bool operator==(const GeneratorParams&) const = default;
};

namespace detail {

/// Ring of waypoints with chords; deterministic layout, `n` in [4, 16].
inline WaypointGraph ring_graph(int n, double radius, Vec3 center, double twist) {
  WaypointGraph g;
  for (int i = 0; i < n; ++i) {
    const double a = twist + 2.0 * std::numbers::pi * i / n;
    const double r = radius * (i % 2 == 0 ? 1.0 : 0.7);
    g.nodes.emplace_back(center.x() + r * std::cos(a), center.y(), center.z() + r * std::sin(a));
  }
  for (int i = 0; i < n; ++i) g.edges.emplace_back(i, (i + 1) % n);
  for (int i = 0; i + n / 2 < n; i += 3) g.edges.emplace_back(i, i + n / 2);
  return g;
}

inline EnvironmentConfig make_environment(int index, bool indoor) {
  EnvironmentConfig e;
  e.indoor = indoor;
  const double twist = 0.37 * index;
  const int n_protagonist = indoor ? 6 : 8 + 2 * (index % 4);
  e.protagonist = ring_graph(n_protagonist, indoor ? 3.0 : 9.0, Vec3::Zero(), twist);
  if (!indoor) e.background = ring_graph(10 + index % 3 * 2, 18.0, Vec3(2.0, 0.0, -1.0), -twist);
  const double r = indoor ? 2.5 : 6.0;
  e.fixtures = {{"stairs", Vec3(r, 0.0, 0.0), 90.0},
                {"bench", Vec3(-r, 0.0, 0.5), 270.0},
                {"bar", Vec3(0.0, 0.0, r), 0.0}};
  return e;
}

}  // namespace detail

inline constexpr std::size_t kHumanModelCount = 20;

/// Defaults: uniform over every table subject to the hard constraints
/// (indoors only in the house, closeup only for actions that allow it). The
/// "simple" environment and the static camera are present with zero weight.
inline GeneratorParams default_params(const std::vector<ActionSpec>& specs = default_action_specs()) {
  GeneratorParams p;
  for (const auto& s : specs) p.actions.push_back(s.name);
  for (std::size_t i = 1; i <= kHumanModelCount; ++i) p.human_models.push_back("model_" + std::to_string(i));
  p.theta_A.assign(p.actions.size(), 1.0);
  p.theta_H.assign(kHumanModelCount, 1.0);
  p.theta_W = {0.25, 0.25, 0.25, 0.25};
  p.theta_D = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0};
  p.theta_V = {0.2, 0.2, 0.2, 0.2, 0.2};
  p.theta_C = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0};

  const auto env = [](Environment e) { return index_of(e); };
  const auto cam = [](CameraBehavior c) { return index_of(c); };

  p.theta_AE.assign(p.actions.size(), std::vector<double>(kEnvironmentCount, 1.0));
  for (auto& row : p.theta_AE) row[env(Environment::simple)] = 0.0;

  p.theta_AC.assign(p.actions.size(), std::vector<double>(kCameraCount, 0.0));
  for (std::size_t a = 0; a < p.actions.size(); ++a) {
    auto& row = p.theta_AC[a];
    row[cam(CameraBehavior::kite)] = 1.0;
    row[cam(CameraBehavior::static_)] = 1.0;
    if (p.actions[a] == "brush hair")
      row[cam(CameraBehavior::closeup)] = 1.0;
    else
      row[cam(CameraBehavior::indoors)] = 1.0;
  }

  p.theta_CE.assign(kCameraCount, std::vector<double>(kEnvironmentCount, 1.0));
  p.theta_CE[cam(CameraBehavior::indoors)].assign(kEnvironmentCount, 0.0);
  p.theta_CE[cam(CameraBehavior::indoors)][env(Environment::house)] = 1.0;

  p.clock_time = {TriangularParams(7.0, 10.0, 9.0), TriangularParams(10.0, 16.0, 13.0),
                  TriangularParams(17.0, 20.0, 18.0), TriangularParams(20.0, 31.0, 24.0)};

  for (std::size_t e = 0; e < kEnvironmentCount; ++e)
    p.environments.push_back(
        detail::make_environment(static_cast<int>(e), static_cast<Environment>(e) == Environment::house));
  return p;
}

// ---------------------------------------------------------------------------
// Validation

struct Finding {
  std::string message;
  bool operator==(const Finding&) const = default;
};

namespace detail {

inline bool row_ok(const std::vector<double>& row) {
  bool positive = false;
  for (double w : row) {
    if (!std::isfinite(w) || w < 0.0) return false;
    positive = positive || w > 0.0;
  }
  return positive;
}

inline bool row_finite_nonnegative(const std::vector<double>& row) {
  return std::all_of(row.begin(), row.end(), [](double w) { return std::isfinite(w) && w >= 0.0; });
}

}  // namespace detail

/// Camera weights for (action, environment), P(C | A, E) up to normalization.
inline std::vector<double> camera_weights(const GeneratorParams& p, std::size_t action, std::size_t env) {
  std::vector<double> w(kCameraCount, 0.0);
  for (std::size_t c = 0; c < kCameraCount; ++c)
    w[c] = p.theta_C[c] * p.theta_AC[action][c] * p.theta_CE[c][env];
  return w;
}

/// Variation weights for an action: objects needs an object protocol, the
/// muscle-level variations need complementary muscles.
inline std::vector<double> variation_weights(const GeneratorParams& p, const ActionSpec& spec) {
  std::vector<double> w = p.theta_V;
  if (spec.object.mode == ObjectMode::none) w[index_of(VariationKind::objects)] = 0.0;
  if (spec.complementary.empty()) {
    w[index_of(VariationKind::perturbation)] = 0.0;
    w[index_of(VariationKind::weakening)] = 0.0;
    w[index_of(VariationKind::blending)] = 0.0;
  }
  return w;
}

/// Structural checks on the parameter tables alone.
inline std::vector<Finding> validate_params(const GeneratorParams& p) {
  std::vector<Finding> out;
  auto add = [&](std::string m) { out.push_back({std::move(m)}); };
  const std::size_t na = p.actions.size();

  if (na == 0) add("no actions configured");
  if (p.theta_A.size() != na) add("theta_A has " + std::to_string(p.theta_A.size()) + " entries for " +
                                  std::to_string(na) + " actions");
  else if (!detail::row_ok(p.theta_A)) add("action weights degenerate");
  if (p.human_models.empty() || p.theta_H.size() != p.human_models.size() || !detail::row_ok(p.theta_H))
    add("human model weights degenerate");
  if (p.theta_W.size() != kWeatherCount || !detail::row_ok(p.theta_W)) add("weather weights degenerate");
  if (p.theta_D.size() != kDayPhaseCount || !detail::row_ok(p.theta_D)) add("day phase weights degenerate");
  if (p.theta_V.size() != kVariationCount || !detail::row_ok(p.theta_V)) add("variation weights degenerate");
  if (p.theta_C.size() != kCameraCount || !detail::row_ok(p.theta_C)) add("camera weights degenerate");

  bool tables_ok = true;
  if (p.theta_AE.size() != na) { add("theta_AE must have one row per action"); tables_ok = false; }
  if (p.theta_AC.size() != na) { add("theta_AC must have one row per action"); tables_ok = false; }
  if (p.theta_CE.size() != kCameraCount) { add("theta_CE must have one row per camera behavior"); tables_ok = false; }
  for (const auto& row : p.theta_AE)
    if (row.size() != kEnvironmentCount || !detail::row_finite_nonnegative(row)) {
      add("theta_AE rows need 7 non-negative entries");
      tables_ok = false;
      break;
    }
  for (const auto& row : p.theta_AC)
    if (row.size() != kCameraCount || !detail::row_finite_nonnegative(row)) {
      add("theta_AC rows need 4 non-negative entries");
      tables_ok = false;
      break;
    }
  for (const auto& row : p.theta_CE)
    if (row.size() != kEnvironmentCount || !detail::row_finite_nonnegative(row)) {
      add("theta_CE rows need 7 non-negative entries");
      tables_ok = false;
      break;
    }

  if (!(std::isfinite(p.t_min) && std::isfinite(p.t_max) && std::isfinite(p.t_mod)) || !(p.t_min > 0.0))
    add("duration bounds must be finite with T_min > 0");
  if (!(p.t_min < p.t_max)) add("T_min must be smaller than T_max");
  if (!(p.t_min <= p.t_mod && p.t_mod <= p.t_max)) add("T_mod must lie in [T_min, T_max]");
  if (!(p.fps > 0.0) || !std::isfinite(p.fps)) add("fps must be positive");
  if (p.width <= 0 || p.height <= 0) add("resolution must be positive");
  if (!(p.vertical_fov_deg > 0.0 && p.vertical_fov_deg < 180.0)) add("vertical fov must lie in (0, 180)");
  if (p.clock_time.size() != kDayPhaseCount) add("clock_time needs one triangular per day phase");
  if (!(p.weather_element_probability >= 0.0 && p.weather_element_probability <= 1.0))
    add("weather element probability must lie in [0, 1]");
  if (p.max_background_actors < 0) add("max_background_actors must be non-negative");
  if (!p.variation.orbit_amplitude.valid() || !p.variation.orbit_frequency.valid() ||
      !p.variation.weakening.valid() || p.variation.weakening.lo < 0.0 || p.variation.weakening.hi > 1.0)
    add("variation ranges invalid");

  if (p.environments.size() != kEnvironmentCount) {
    add("environments must list all 7 environments");
    tables_ok = false;
  } else {
    for (std::size_t e = 0; e < kEnvironmentCount; ++e) {
      const auto& env = p.environments[e];
      const std::string name(to_string(static_cast<Environment>(e)));
      if (env.protagonist.nodes.empty()) add("environment '" + name + "' has no protagonist waypoints");
      for (const auto* g : {&env.protagonist, &env.background})
        for (const auto& [a, b] : g->edges)
          if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= g->nodes.size() ||
              static_cast<std::size_t>(b) >= g->nodes.size())
            add("environment '" + name + "' has an edge to a missing node");
      if (!env.indoor && env.background.nodes.empty() && p.max_background_actors > 0)
        add("outdoor environment '" + name + "' has no background waypoints");
    }
  }

  if (!tables_ok || out.size() > 0) return out;

  for (std::size_t a = 0; a < na; ++a) {
    if (p.theta_A[a] <= 0.0) continue;
    const std::string& name = p.actions[a];
    if (!detail::row_ok(p.theta_AE[a])) {
      add("action '" + name + "' has no compatible environment");
      continue;
    }
    for (std::size_t e = 0; e < kEnvironmentCount; ++e) {
      if (p.theta_AE[a][e] <= 0.0) continue;
      if (!detail::row_ok(camera_weights(p, a, e)))
        add("action '" + name + "' has no compatible camera in environment '" +
            std::string(to_string(static_cast<Environment>(e))) + "'");
    }
  }
  return out;
}

/// Full check against a motion library: specs must line up with the action
/// rows and every weighted action needs an admissible motion.
inline std::vector<Finding> validate_params(const GeneratorParams& p, const MotionLibrary& library) {
  auto out = validate_params(p);
  auto add = [&](std::string m) { out.push_back({std::move(m)}); };
  if (library.action_count() != p.actions.size()) {
    add("library defines " + std::to_string(library.action_count()) + " actions, config " +
        std::to_string(p.actions.size()));
    return out;
  }
  for (std::size_t a = 0; a < p.actions.size(); ++a) {
    const auto& spec = library.specs()[a];
    if (spec.name != p.actions[a]) {
      add("action " + std::to_string(a) + " is '" + p.actions[a] + "' in the config but '" + spec.name +
          "' in the library");
      continue;
    }
    if (a >= p.theta_A.size() || p.theta_A[a] <= 0.0) continue;
    if (admissible_motions(a, library, p.t_min).empty())
      add("action '" + spec.name + "' has no admissible motion");
    if (p.theta_V.size() == kVariationCount && !detail::row_ok(variation_weights(p, spec)))
      add("action '" + spec.name + "' has no admissible variation");
    if (spec.object.mode == ObjectMode::fixture && p.environments.size() == kEnvironmentCount &&
        p.theta_V.size() == kVariationCount && p.theta_V[index_of(VariationKind::objects)] > 0.0 &&
        p.theta_AE.size() == p.actions.size())
      for (std::size_t e = 0; e < kEnvironmentCount; ++e) {
        if (p.theta_AE[a].size() != kEnvironmentCount || p.theta_AE[a][e] <= 0.0) continue;
        const auto& fx = p.environments[e].fixtures;
        if (std::none_of(fx.begin(), fx.end(), [&](const Fixture& f) { return f.kind == spec.object.kind; }))
          add("action '" + spec.name + "' needs a '" + spec.object.kind + "' fixture in environment '" +
              std::string(to_string(static_cast<Environment>(e))) + "'");
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace io {

inline json graph_to_json(const WaypointGraph& g) {
  json nodes = json::array();
  for (const auto& n : g.nodes) nodes.push_back(vec_to_json(n));
  json edges = json::array();
  for (const auto& [a, b] : g.edges) edges.push_back(json::array({a, b}));
  return {{"nodes", nodes}, {"edges", edges}};
}

inline WaypointGraph graph_from_json(const json& j) {
  WaypointGraph g;
  for (const auto& n : j.value("nodes", json::array())) g.nodes.push_back(vec_from_json(n, "waypoint"));
  for (const auto& e : j.value("edges", json::array()))
    g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return g;
}

inline json triangular_to_json(const TriangularParams& t) {
  return {{"lower", t.lower()}, {"upper", t.upper()}, {"mode", t.mode()}};
}

inline TriangularParams triangular_from_json(const json& j) {
  return TriangularParams(j.at("lower").get<double>(), j.at("upper").get<double>(), j.at("mode").get<double>());
}

inline json params_to_json(const GeneratorParams& p) {
  json envs = json::object();
  for (std::size_t e = 0; e < p.environments.size(); ++e) {
    const auto& env = p.environments[e];
    json fixtures = json::array();
    for (const auto& f : env.fixtures)
      fixtures.push_back({{"kind", f.kind}, {"position", vec_to_json(f.position)}, {"heading_deg", f.heading_deg}});
    envs[std::string(to_string(static_cast<Environment>(e)))] = {
        {"indoor", env.indoor},
        {"protagonist_graph", graph_to_json(env.protagonist)},
        {"background_graph", graph_to_json(env.background)},
        {"fixtures", fixtures}};
  }
  json clock = json::object();
  for (std::size_t d = 0; d < p.clock_time.size() && d < kDayPhaseCount; ++d)
    clock[std::string(to_string(static_cast<DayPhase>(d)))] = triangular_to_json(p.clock_time[d]);
  return {{"format", "phav-generator-params"},
          {"version", 1},
          {"actions", p.actions},
          {"human_models", p.human_models},
          {"theta_A", p.theta_A},
          {"theta_H", p.theta_H},
          {"theta_W", p.theta_W},
          {"theta_D", p.theta_D},
          {"theta_V", p.theta_V},
          {"theta_C", p.theta_C},
          {"theta_AE", p.theta_AE},
          {"theta_AC", p.theta_AC},
          {"theta_CE", p.theta_CE},
          {"T_min", p.t_min},
          {"T_max", p.t_max},
          {"T_mod", p.t_mod},
          {"fps", p.fps},
          {"resolution", json::array({p.width, p.height})},
          {"vertical_fov_deg", p.vertical_fov_deg},
          {"clock_time", clock},
          {"weather_element_probability", p.weather_element_probability},
          {"max_background_actors", p.max_background_actors},
          {"environments", envs},
          {"variation",
           {{"orbit_amplitude", range_to_json(p.variation.orbit_amplitude)},
            {"orbit_frequency", range_to_json(p.variation.orbit_frequency)},
            {"weakening", range_to_json(p.variation.weakening)}}},
          {"camera", rig_ranges_to_json(p.camera)}};
}

/// Missing fields fall back to the defaults; present fields replace them.
inline GeneratorParams params_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  GeneratorParams p = default_params();
  try {
    auto get = [&](const char* key, auto& dst) {
      if (j.contains(key)) dst = j[key].get<std::decay_t<decltype(dst)>>();
    };
    get("actions", p.actions);
    get("human_models", p.human_models);
    if (j.contains("actions") && !j.contains("theta_A")) p.theta_A.assign(p.actions.size(), 1.0);
    get("theta_A", p.theta_A);
    get("theta_H", p.theta_H);
    get("theta_W", p.theta_W);
    get("theta_D", p.theta_D);
    get("theta_V", p.theta_V);
    get("theta_C", p.theta_C);
    get("theta_AE", p.theta_AE);
    get("theta_AC", p.theta_AC);
    get("theta_CE", p.theta_CE);
    get("T_min", p.t_min);
    get("T_max", p.t_max);
    get("T_mod", p.t_mod);
    get("fps", p.fps);
    if (j.contains("resolution")) {
      p.width = j["resolution"].at(0).get<int>();
      p.height = j["resolution"].at(1).get<int>();
    }
    get("vertical_fov_deg", p.vertical_fov_deg);
    if (j.contains("clock_time"))
      for (const auto& [name, t] : j["clock_time"].items())
        p.clock_time.at(index_of(parse_enum<DayPhase>(name))) = triangular_from_json(t);
    get("weather_element_probability", p.weather_element_probability);
    get("max_background_actors", p.max_background_actors);
    if (j.contains("environments"))
      for (const auto& [name, e] : j["environments"].items()) {
        auto& env = p.environments.at(index_of(parse_enum<Environment>(name)));
        env.indoor = e.value("indoor", env.indoor);
        if (e.contains("protagonist_graph")) env.protagonist = graph_from_json(e["protagonist_graph"]);
        if (e.contains("background_graph")) env.background = graph_from_json(e["background_graph"]);
        if (e.contains("fixtures")) {
          env.fixtures.clear();
          for (const auto& f : e["fixtures"])
            env.fixtures.push_back({f.at("kind").get<std::string>(), vec_from_json(f.at("position"), "fixture"),
                                    f.value("heading_deg", 0.0)});
        }
      }
    if (j.contains("variation")) {
      const auto& v = j["variation"];
      if (v.contains("orbit_amplitude")) p.variation.orbit_amplitude = range_from_json(v["orbit_amplitude"]);
      if (v.contains("orbit_frequency")) p.variation.orbit_frequency = range_from_json(v["orbit_frequency"]);
      if (v.contains("weakening")) p.variation.weakening = range_from_json(v["weakening"]);
    }
    if (j.contains("camera")) p.camera = rig_ranges_from_json(j["camera"]);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("config: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return p;
}

}  // namespace io

inline GeneratorParams load_params(const std::filesystem::path& path) {
  return io::params_from_json(io::read_json_file(path));
}

inline void save_params(const GeneratorParams& p, const std::filesystem::path& path) {
  io::write_text_file(path, io::params_to_json(p).dump(1) + "\n");
}

}  // namespace phav
