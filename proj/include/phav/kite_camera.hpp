#pragma once

// Kite camera: a camera body tied by a spring to a target body, itself tied
// by a spring to the protagonist. Each spring has a tolerance zone inside
// which it exerts no force. Includes pinhole projection of joints.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "phav/distributions.hpp"
#include "phav/domain.hpp"
#include "phav/skeleton.hpp"

namespace phav {

struct SpringParams {
  double stiffness = 20.0;    ///< N/m
  double damping = 2.0;       ///< N s/m, along the spring axis
  double rest_length = 1.0;   ///< m
  double min_distance = 1.0;  ///< tolerance zone radius, one of {0, 1, 2} m
  bool operator==(const SpringParams&) const = default;
};

struct RigParams {
  double camera_mass = 1.0;   ///< kg
  double camera_drag = 0.5;   ///< 1/s
  double target_mass = 1.0;
  double target_drag = 0.5;
  SpringParams spring1{20.0, 2.0, 0.5, 1.0};  ///< camera <-> target
  SpringParams spring2{20.0, 2.0, 4.0, 1.0};  ///< target <-> protagonist
  Vec3 impulse = Vec3::Zero();                ///< N s, applied to the camera at t = 0
  CameraBehavior kind = CameraBehavior::kite;
  double azimuth_deg = 180.0;   ///< initial bearing relative to the protagonist heading
  double elevation_deg = 20.0;  ///< initial elevation of the rig above the focus point

  void validate() const {
    auto bad = [](const std::string& what) { throw std::invalid_argument("rig: " + what); };
    if (!(camera_mass > 0.0) || !(target_mass > 0.0)) bad("masses must be positive");
    if (!(camera_drag >= 0.0) || !(target_drag >= 0.0)) bad("drags must be non-negative");
    for (const auto* s : {&spring1, &spring2}) {
      if (!(s->stiffness >= 0.0) || !(s->damping >= 0.0)) bad("spring constants must be non-negative");
      if (!(s->rest_length >= 0.0)) bad("rest length must be non-negative");
      if (s->min_distance != 0.0 && s->min_distance != 1.0 && s->min_distance != 2.0)
        bad("min distance must be 0, 1 or 2 m");
    }
    if (!impulse.allFinite()) bad("impulse must be finite");
  }
  bool operator==(const RigParams&) const = default;
};

/// The default kite rig used when nothing is sampled.
inline RigParams default_rig() { return RigParams{}; }

struct CameraState {
  Vec3 camera_position = Vec3::Zero();
  Vec3 camera_velocity = Vec3::Zero();
  Vec3 target_position = Vec3::Zero();
  Vec3 target_velocity = Vec3::Zero();

  bool finite() const {
    return camera_position.allFinite() && camera_velocity.allFinite() &&
           target_position.allFinite() && target_velocity.allFinite();
  }
  bool operator==(const CameraState&) const = default;
};

// ---------------------------------------------------------------------------
// Dynamics

/// Spring potential as a function of separation d. Zero inside the tolerance
/// zone, Hooke beyond it, shifted so the potential is continuous at the zone
/// boundary.
inline double spring_potential(const SpringParams& s, double d) {
  if (d < s.min_distance) return 0.0;
  const double e = d - s.rest_length;
  const double e0 = s.min_distance - s.rest_length;
  return 0.5 * s.stiffness * (e * e - e0 * e0);
}

inline double spring_potential_derivative(const SpringParams& s, double d) {
  if (d < s.min_distance) return 0.0;
  return s.stiffness * (d - s.rest_length);
}

/// Instantaneous spring force on endpoint a (the other endpoint receives the
/// opposite force): Hooke plus axial damping, zero inside the tolerance zone.
inline Vec3 spring_force(const SpringParams& s, const Vec3& a, const Vec3& b, const Vec3& va,
                         const Vec3& vb) {
  const Vec3 r = a - b;
  const double d = r.norm();
  if (d < s.min_distance || d < 1e-12) return Vec3::Zero();
  const Vec3 n = r / d;
  return -(s.stiffness * (d - s.rest_length) + s.damping * (va - vb).dot(n)) * n;
}

/// Kinetic energy of both bodies plus the potential of both springs.
inline double energy(const CameraState& st, const RigParams& rig, const Vec3& protagonist) {
  return 0.5 * rig.camera_mass * st.camera_velocity.squaredNorm() +
         0.5 * rig.target_mass * st.target_velocity.squaredNorm() +
         spring_potential(rig.spring1, (st.camera_position - st.target_position).norm()) +
         spring_potential(rig.spring2, (st.target_position - protagonist).norm());
}

namespace detail {

/// Discrete gradient of a radial potential between separations r0 and r1.
/// Returns the force on the first endpoint; its work over the step equals
/// minus the exact potential change.
inline Vec3 discrete_spring_force(const SpringParams& s, const Vec3& r0, const Vec3& r1) {
  const double q0 = r0.squaredNorm();
  const double q1 = r1.squaredNorm();
  const double dq = q1 - q0;
  double coeff;
  if (std::abs(dq) > 1e-12 * std::max(1.0, q0)) {
    coeff = (spring_potential(s, std::sqrt(q1)) - spring_potential(s, std::sqrt(q0))) / dq;
  } else {
    const double rho = std::sqrt(0.5 * (q0 + q1));
    if (rho < 1e-12) return Vec3::Zero();
    coeff = spring_potential_derivative(s, rho) / (2.0 * rho);
  }
  return -coeff * (r0 + r1);
}

inline Vec3 midpoint_damping(const SpringParams& s, const Vec3& r_mid, const Vec3& v_rel) {
  const double d = r_mid.norm();
  if (s.damping == 0.0 || d < s.min_distance || d < 1e-12) return Vec3::Zero();
  const Vec3 n = r_mid / d;
  return -s.damping * v_rel.dot(n) * n;
}

}  // namespace detail

/// One integration step of length dt with the protagonist at `protagonist`
/// moving with `protagonist_velocity` (used only for spring-2 damping).
///
/// Energy-consistent implicit midpoint scheme: spring forces are discrete
/// gradients of the spring potentials and damping/drag act on midpoint
/// velocities, so with a stationary protagonist the step can only dissipate
/// energy. The implicit equations are solved by fixed-point iteration.
inline CameraState step(const CameraState& s, const RigParams& rig, const Vec3& protagonist,
                        double dt, const Vec3& protagonist_velocity = Vec3::Zero()) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be positive");
  if (!s.finite() || !protagonist.allFinite())
    throw std::domain_error("step: non-finite camera state");

  const double mc = rig.camera_mass, mt = rig.target_mass;
  CameraState n = s;
  for (int iter = 0; iter < 100; ++iter) {
    const Vec3 vc_mid = 0.5 * (s.camera_velocity + n.camera_velocity);
    const Vec3 vt_mid = 0.5 * (s.target_velocity + n.target_velocity);
    const Vec3 r1a = s.camera_position - s.target_position;
    const Vec3 r1b = n.camera_position - n.target_position;
    const Vec3 r2a = s.target_position - protagonist;
    const Vec3 r2b = n.target_position - protagonist;

    const Vec3 f1 = detail::discrete_spring_force(rig.spring1, r1a, r1b) +
                    detail::midpoint_damping(rig.spring1, 0.5 * (r1a + r1b), vc_mid - vt_mid);
    const Vec3 f2 = detail::discrete_spring_force(rig.spring2, r2a, r2b) +
                    detail::midpoint_damping(rig.spring2, 0.5 * (r2a + r2b), vt_mid - protagonist_velocity);

    const Vec3 fc = f1 - rig.camera_drag * mc * vc_mid;
    const Vec3 ft = -f1 + f2 - rig.target_drag * mt * vt_mid;

    CameraState next;
    next.camera_velocity = s.camera_velocity + dt / mc * fc;
    next.target_velocity = s.target_velocity + dt / mt * ft;
    next.camera_position = s.camera_position + 0.5 * dt * (s.camera_velocity + next.camera_velocity);
    next.target_position = s.target_position + 0.5 * dt * (s.target_velocity + next.target_velocity);

    const double change = (next.camera_position - n.camera_position).norm() +
                          (next.target_position - n.target_position).norm() +
                          dt * ((next.camera_velocity - n.camera_velocity).norm() +
                                (next.target_velocity - n.target_velocity).norm());
    const double scale = 1.0 + s.camera_position.norm() + s.target_position.norm();
    n = next;
    if (change <= 1e-14 * scale) break;
  }
  if (!n.finite()) throw std::domain_error("step: integration diverged");
  return n;
}

/// Initial rig geometry: the target sits rest2 away from the focus point along
/// the rig's bearing, the camera rest1 further out, both at rest. The impulse
/// sets the camera's initial velocity.
inline CameraState initial_camera_state(const RigParams& rig, const Vec3& focus,
                                        double protagonist_heading_deg) {
  const double az = deg2rad(protagonist_heading_deg + rig.azimuth_deg);
  const double el = deg2rad(rig.elevation_deg);
  const Vec3 dir(std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az));
  CameraState s;
  s.target_position = focus + rig.spring2.rest_length * dir;
  s.camera_position = s.target_position + rig.spring1.rest_length * dir;
  s.camera_velocity = rig.impulse / rig.camera_mass;
  return s;
}

// ---------------------------------------------------------------------------
// Camera poses and trajectories

struct CameraPose {
  Vec3 position = Vec3::Zero();
  Vec3 forward = Vec3::UnitZ();
  Vec3 up = Vec3::UnitY();
  Vec3 right = -Vec3::UnitX();
};

/// Roll-free look-at. Falls back to +z as the reference up vector when looking
/// straight up or down.
inline CameraPose look_at(const Vec3& position, const Vec3& point,
                          const Vec3& previous_forward = Vec3::UnitZ()) {
  CameraPose p;
  p.position = position;
  Vec3 f = point - position;
  p.forward = f.norm() > 1e-12 ? Vec3(f.normalized()) : previous_forward;
  Vec3 r = p.forward.cross(Vec3::UnitY());
  if (r.norm() < 1e-9) r = p.forward.cross(Vec3::UnitZ());
  p.right = r.normalized();
  p.up = p.right.cross(p.forward);
  return p;
}

struct CameraFrame {
  Vec3 position = Vec3::Zero();
  Vec3 forward = Vec3::UnitZ();  ///< unit look direction
  Vec3 target = Vec3::Zero();    ///< target body position
  CameraPose pose() const { return look_at(position, position + forward, forward); }
};

struct CameraTrajectory {
  double fps = 30.0;
  std::vector<CameraFrame> frames;
};

/// Protagonist focus point as a function of time.
using FocusPath = std::function<Vec3(double)>;

/// Linear interpolation through per-frame positions sampled at `fps`.
inline FocusPath focus_from_frames(std::vector<Vec3> positions, double fps) {
  if (positions.empty()) throw std::invalid_argument("focus path: no positions");
  return [pts = std::move(positions), fps](double t) {
    const double x = std::max(0.0, t * fps);
    const auto i = static_cast<std::size_t>(std::floor(x));
    if (i + 1 >= pts.size()) return pts.back();
    const double s = x - static_cast<double>(i);
    return Vec3(pts[i] + s * (pts[i + 1] - pts[i]));
  };
}

struct SimulationOptions {
  double internal_rate = 120.0;  ///< Hz; the step size is at most 1 / internal_rate
  /// Called after every internal step with (time, state); optional.
  std::function<void(double, const CameraState&)> on_step;
};

/// Integrates the rig for round(duration * fps) frames. Frame k shows time
/// k / fps; frame 0 is the initial state.
inline CameraTrajectory simulate(const RigParams& rig, const FocusPath& focus, double fps,
                                 double duration, const CameraState& initial,
                                 const SimulationOptions& opt = {}) {
  rig.validate();
  if (!(fps > 0.0) || !(duration >= 0.0)) throw std::invalid_argument("simulate: bad timing");
  if (!(opt.internal_rate > 0.0)) throw std::invalid_argument("simulate: bad internal rate");
  const auto frames = static_cast<std::size_t>(std::llround(duration * fps));
  const int substeps = std::max(1, static_cast<int>(std::ceil(opt.internal_rate / fps - 1e-9)));
  const double dt = 1.0 / (fps * substeps);

  CameraTrajectory traj;
  traj.fps = fps;
  traj.frames.reserve(frames);
  CameraState s = initial;
  Vec3 fwd = Vec3::UnitZ();
  for (std::size_t f = 0; f < frames; ++f) {
    const double t = static_cast<double>(f) / fps;
    if (f > 0) {
      for (int k = 0; k < substeps; ++k) {
        const double t0 = static_cast<double>(f - 1) / fps + k * dt;
        const Vec3 p0 = focus(t0);
        const Vec3 p1 = focus(t0 + dt);
        s = step(s, rig, 0.5 * (p0 + p1), dt, (p1 - p0) / dt);
        if (opt.on_step) opt.on_step(t0 + dt, s);
      }
    }
    const Vec3 p = focus(t);
    CameraFrame cf;
    cf.position = s.camera_position;
    cf.target = s.target_position;
    const Vec3 d = p - s.camera_position;
    cf.forward = d.norm() > 1e-12 ? Vec3(d.normalized()) : fwd;
    fwd = cf.forward;
    traj.frames.push_back(cf);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Projection

struct Intrinsics {
  double vertical_fov_deg = 60.0;
  int width = 340;
  int height = 256;

  double focal_px() const {
    if (!(vertical_fov_deg > 0.0 && vertical_fov_deg < 180.0))
      throw std::invalid_argument("intrinsics: fov must lie in (0, 180)");
    return 0.5 * height / std::tan(0.5 * deg2rad(vertical_fov_deg));
  }
};

struct Projection {
  double x = 0.0;  ///< pixels, origin top-left, x to the right
  double y = 0.0;  ///< pixels, y down
  bool visible = false;  ///< in front of the camera
};

inline Projection project(const CameraPose& cam, const Intrinsics& k, const Vec3& point) {
  const double f = k.focal_px();
  const Vec3 p = point - cam.position;
  const double depth = p.dot(cam.forward);
  Projection out;
  out.visible = depth > 1e-9;
  if (!out.visible) return out;
  out.x = 0.5 * k.width + f * p.dot(cam.right) / depth;
  out.y = 0.5 * k.height - f * p.dot(cam.up) / depth;
  return out;
}

/// Unit ray direction through pixel (x, y).
inline Vec3 unproject(const CameraPose& cam, const Intrinsics& k, double x, double y) {
  const double f = k.focal_px();
  const Vec3 d = cam.forward + ((x - 0.5 * k.width) / f) * cam.right -
                 ((y - 0.5 * k.height) / f) * cam.up;
  return d.normalized();
}

struct BBox {
  double x0 = -1.0, y0 = -1.0, x1 = -1.0, y1 = -1.0;
  bool valid = false;  ///< false when no point was visible
};

/// Min/max of the visible projections, clamped to the image. Invisible
/// points are ignored; with none visible the box is (-1, -1, -1, -1).
inline BBox bbox_of(std::span<const Projection> points, const Intrinsics& k) {
  BBox b;
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const auto& p : points) {
    if (!p.visible) continue;
    b.valid = true;
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  if (!b.valid) return b;
  const double w = k.width, h = k.height;
  b.x0 = std::clamp(x0, 0.0, w);
  b.x1 = std::clamp(x1, 0.0, w);
  b.y0 = std::clamp(y0, 0.0, h);
  b.y1 = std::clamp(y1, 0.0, h);
  return b;
}

// ---------------------------------------------------------------------------
// Sampling

struct RigRanges {
  Range stiffness{5.0, 60.0};
  Range damping{0.5, 8.0};
  Range mass{0.5, 4.0};
  Range drag{0.1, 2.0};
  Range rest1{0.0, 0.5};
  Range rest2_kite{2.5, 7.0};
  Range rest2_closeup{0.8, 1.6};
  Range rest2_indoors{1.5, 3.5};
  Range impulse{0.0, 2.0};  ///< magnitude, N s
  Range elevation_kite{15.0, 40.0};
  Range elevation_closeup{0.0, 15.0};
  Range elevation_indoors{5.0, 25.0};
  double static_drag = 50.0;
  bool operator==(const RigRanges&) const = default;
};

inline constexpr std::array<double, 3> kMinDistances{0.0, 1.0, 2.0};

inline RigParams sample_rig(CameraBehavior kind, RngStream& rng, const RigRanges& r = {}) {
  RigParams p;
  p.kind = kind;
  p.camera_mass = uniform_sample(r.mass, rng);
  p.target_mass = uniform_sample(r.mass, rng);
  p.camera_drag = uniform_sample(r.drag, rng);
  p.target_drag = uniform_sample(r.drag, rng);
  p.spring1.stiffness = uniform_sample(r.stiffness, rng);
  p.spring1.damping = uniform_sample(r.damping, rng);
  p.spring1.rest_length = uniform_sample(r.rest1, rng);
  p.spring1.min_distance = kMinDistances[rng.uniform_index(3)];
  p.spring2.stiffness = uniform_sample(r.stiffness, rng);
  p.spring2.damping = uniform_sample(r.damping, rng);
  const Range& rest2 = kind == CameraBehavior::closeup   ? r.rest2_closeup
                       : kind == CameraBehavior::indoors ? r.rest2_indoors
                                                         : r.rest2_kite;
  p.spring2.rest_length = uniform_sample(rest2, rng);
  p.spring2.min_distance = kMinDistances[rng.uniform_index(3)];
  const double mag = uniform_sample(r.impulse, rng);
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  p.impulse = mag * Vec3(rho * std::cos(phi), rho * std::sin(phi), z);
  p.azimuth_deg = rng.uniform(0.0, 360.0);
  const Range& elev = kind == CameraBehavior::closeup   ? r.elevation_closeup
                      : kind == CameraBehavior::indoors ? r.elevation_indoors
                                                        : r.elevation_kite;
  p.elevation_deg = uniform_sample(elev, rng);
  if (kind == CameraBehavior::static_) {
    p.spring1.stiffness = 0.0;
    p.spring1.damping = 0.0;
    p.camera_drag = r.static_drag;
    p.impulse = Vec3::Zero();
  }
  return p;
}

// ---------------------------------------------------------------------------
// JSON

namespace io {

using nlohmann::json;

inline json spring_to_json(const SpringParams& s) {
  return {{"stiffness", s.stiffness}, {"damping", s.damping}, {"rest_length", s.rest_length},
          {"min_distance", s.min_distance}};
}

inline SpringParams spring_from_json(const json& j) {
  SpringParams s;
  s.stiffness = j.at("stiffness").get<double>();
  s.damping = j.at("damping").get<double>();
  s.rest_length = j.at("rest_length").get<double>();
  s.min_distance = j.at("min_distance").get<double>();
  return s;
}

inline json rig_to_json(const RigParams& r) {
  return {{"kind", std::string(to_string(r.kind))},
          {"camera_mass", r.camera_mass},
          {"camera_drag", r.camera_drag},
          {"target_mass", r.target_mass},
          {"target_drag", r.target_drag},
          {"spring1", spring_to_json(r.spring1)},
          {"spring2", spring_to_json(r.spring2)},
          {"impulse", json::array({r.impulse.x(), r.impulse.y(), r.impulse.z()})},
          {"azimuth_deg", r.azimuth_deg},
          {"elevation_deg", r.elevation_deg}};
}

inline RigParams rig_from_json(const json& j) {
  RigParams r;
  r.kind = parse_enum<CameraBehavior>(j.value("kind", std::string("kite")));
  r.camera_mass = j.value("camera_mass", r.camera_mass);
  r.camera_drag = j.value("camera_drag", r.camera_drag);
  r.target_mass = j.value("target_mass", r.target_mass);
  r.target_drag = j.value("target_drag", r.target_drag);
  if (j.contains("spring1")) r.spring1 = spring_from_json(j["spring1"]);
  if (j.contains("spring2")) r.spring2 = spring_from_json(j["spring2"]);
  if (j.contains("impulse")) {
    const auto& v = j["impulse"];
    r.impulse = Vec3(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>());
  }
  r.azimuth_deg = j.value("azimuth_deg", r.azimuth_deg);
  r.elevation_deg = j.value("elevation_deg", r.elevation_deg);
  r.validate();
  return r;
}

inline json range_to_json(const Range& r) { return json::array({r.lo, r.hi}); }

inline Range range_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("range must be [lo, hi]");
  Range r{j[0].get<double>(), j[1].get<double>()};
  if (!r.valid()) throw std::invalid_argument("range lo must not exceed hi");
  return r;
}

inline json rig_ranges_to_json(const RigRanges& r) {
  return {{"stiffness", range_to_json(r.stiffness)},
          {"damping", range_to_json(r.damping)},
          {"mass", range_to_json(r.mass)},
          {"drag", range_to_json(r.drag)},
          {"rest1", range_to_json(r.rest1)},
          {"rest2_kite", range_to_json(r.rest2_kite)},
          {"rest2_closeup", range_to_json(r.rest2_closeup)},
          {"rest2_indoors", range_to_json(r.rest2_indoors)},
          {"impulse", range_to_json(r.impulse)},
          {"elevation_kite", range_to_json(r.elevation_kite)},
          {"elevation_closeup", range_to_json(r.elevation_closeup)},
          {"elevation_indoors", range_to_json(r.elevation_indoors)},
          {"static_drag", r.static_drag}};
}

inline RigRanges rig_ranges_from_json(const json& j) {
  RigRanges r;
  auto get = [&](const char* key, Range& dst) {
    if (j.contains(key)) dst = range_from_json(j[key]);
  };
  get("stiffness", r.stiffness);
  get("damping", r.damping);
  get("mass", r.mass);
  get("drag", r.drag);
  get("rest1", r.rest1);
  get("rest2_kite", r.rest2_kite);
  get("rest2_closeup", r.rest2_closeup);
  get("rest2_indoors", r.rest2_indoors);
  get("impulse", r.impulse);
  get("elevation_kite", r.elevation_kite);
  get("elevation_closeup", r.elevation_closeup);
  get("elevation_indoors", r.elevation_indoors);
  r.static_drag = j.value("static_drag", r.static_drag);
  return r;
}

}  // namespace io

}  // namespace phav
