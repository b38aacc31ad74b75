#pragma once

// Bundled stand-in motion library: 35 illustrative action specs and a set of
// synthetic keyframed clips, at least two per action. Poses are procedural
// approximations of each action; regexes, critical muscle sets and object
// protocols are hand-chosen defaults, not canonical values.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "phav/motion.hpp"

namespace phav {

namespace library_detail {

using M = Muscle;

struct Pose {
  std::array<Vec3, kMuscleCount> r;
  Vec3 root = Vec3::Zero();

  Pose() { r.fill(Vec3::Zero()); }
  Vec3& operator[](M m) { return r[static_cast<std::size_t>(m)]; }
};

using PoseFn = std::function<void(double t, Pose&)>;

inline double round_to(double x, double step) { return std::round(x / step) * step; }

/// Samples `fn` at `fps` over [0, duration]. Authored clips are clamped to the
/// joint limits; `raw` clips keep whatever the pose function produced.
inline MotionClip make_clip(std::string id, MotionSource source, std::string description,
                            double duration, const PoseFn& fn, bool raw = false,
                            double fps = 10.0) {
  MotionClip c;
  c.id = std::move(id);
  c.source = source;
  c.description = std::move(description);
  c.fps = fps;
  c.duration = duration;
  const auto& sk = c.skeleton.skeleton();
  const int n = static_cast<int>(std::floor(duration * fps + 1e-9));
  std::vector<double> times;
  for (int k = 0; k <= n; ++k) times.push_back(k / fps);
  if (duration - times.back() > 1e-9) times.push_back(duration);
  for (double t : times) {
    Pose p;
    fn(t, p);
    for (std::size_t m = 0; m < kMuscleCount; ++m) {
      Vec3 e = p.r[m];
      for (int a = 0; a < 3; ++a) {
        double v = round_to(e[a], 0.01);
        if (!raw) v = std::clamp(v, sk.joints[m].limits[a].lo, sk.joints[m].limits[a].hi);
        e[a] = v;
      }
      c.tracks[m].push_back({round_to(t, 1e-6), e});
    }
    c.root.push_back({round_to(t, 1e-6), Vec3(round_to(p.root.x(), 1e-4),
                                             round_to(p.root.y(), 1e-4),
                                             round_to(p.root.z(), 1e-4))});
  }
  return c;
}

constexpr double kTau = 2.0 * std::numbers::pi;

/// Smooth 0 -> 1 ramp between t0 and t1.
inline double ramp(double t, double t0, double t1) {
  if (t <= t0) return 0.0;
  if (t >= t1) return 1.0;
  const double s = (t - t0) / (t1 - t0);
  return s * s * (3.0 - 2.0 * s);
}

struct Gait {
  double freq = 0.9;       ///< strides per second
  double hip = 25.0;       ///< thigh swing amplitude, degrees
  double knee = 35.0;      ///< peak knee flexion
  double arm = 20.0;       ///< arm counter-swing
  double elbow = -15.0;    ///< resting elbow flexion
  double speed = 1.2;      ///< m/s along +z
  double lean = 3.0;       ///< spine forward bend
  double bob = 0.02;       ///< vertical pelvis bob, meters
};

inline void gait(double t, const Gait& g, Pose& p) {
  const double ph = kTau * g.freq * t;
  const double s = std::sin(ph);
  p[M::thigh_l].x() = -g.hip * s;
  p[M::thigh_r].x() = g.hip * s;
  p[M::calf_l].x() = g.knee * std::max(0.0, std::sin(ph + 1.2));
  p[M::calf_r].x() = g.knee * std::max(0.0, -std::sin(ph + 1.2));
  p[M::foot_l].x() = 8.0 * std::sin(ph + 0.6);
  p[M::foot_r].x() = -8.0 * std::sin(ph + 0.6);
  p[M::upper_arm_l].x() = g.arm * s;
  p[M::upper_arm_r].x() = -g.arm * s;
  p[M::upper_arm_l].z() = 6.0;
  p[M::upper_arm_r].z() = -6.0;
  p[M::forearm_l].x() = g.elbow - 0.4 * g.arm * std::max(0.0, -s);
  p[M::forearm_r].x() = g.elbow - 0.4 * g.arm * std::max(0.0, s);
  p[M::spine].x() = g.lean;
  p[M::spine].y() = 4.0 * s;
  p[M::pelvis].y() = -5.0 * s;
  p.root = Vec3(0.0, g.bob * std::cos(2.0 * ph), g.speed * t);
}

inline void stand_idle(double t, Pose& p) {
  p[M::upper_arm_l].z() = 5.0;
  p[M::upper_arm_r].z() = -5.0;
  p[M::forearm_l].x() = -8.0;
  p[M::forearm_r].x() = -8.0;
  p[M::spine].x() = 1.5 * std::sin(kTau * 0.2 * t);
  p[M::head].y() = 6.0 * std::sin(kTau * 0.1 * t);
}

/// Crouched seat pose blended with standing by `s` in [0, 1] (1 = seated).
inline void seat(double s, Pose& p) {
  p[M::thigh_l].x() = -90.0 * s;
  p[M::thigh_r].x() = -90.0 * s;
  p[M::calf_l].x() = 90.0 * s;
  p[M::calf_r].x() = 90.0 * s;
  p[M::spine].x() += 15.0 * s;
  p.root.y() = -0.42 * s;
  p.root.z() = -0.15 * s;
}

struct Builder {
  std::vector<MotionClip> clips;
  int counter = 0;

  void add(const std::string& stem, MotionSource src, const std::string& desc, double duration,
           const PoseFn& fn, bool raw = false) {
    ++counter;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", counter);
    clips.push_back(make_clip("b" + std::string(buf) + "_" + stem, src, desc, duration, fn, raw));
  }
};

inline MuscleSet operator+(MuscleSet a, MuscleSet b) { return a | b; }

inline const MuscleSet kArmL{M::upper_arm_l, M::forearm_l, M::hand_l};
inline const MuscleSet kArmR{M::upper_arm_r, M::forearm_r, M::hand_r};
inline const MuscleSet kLegL{M::thigh_l, M::calf_l, M::foot_l};
inline const MuscleSet kLegR{M::thigh_r, M::calf_r, M::foot_r};
inline const MuscleSet kArms = kArmL | kArmR;
inline const MuscleSet kLegs = kLegL | kLegR;
inline const MuscleSet kCore{M::pelvis, M::spine};
inline const MuscleSet kHead{M::head};

inline ActionSpec spec(std::string name, ActionClass cls, std::vector<std::string> patterns,
                       MuscleSet critical, ObjectProtocol object = {}) {
  ActionSpec a;
  a.name = std::move(name);
  a.action_class = cls;
  a.patterns = std::move(patterns);
  a.critical = critical;
  a.complementary = critical.complement();
  a.object = std::move(object);
  a.supporting_actors = cls == ActionClass::two_people ? 1 : 0;
  return a;
}

inline ObjectProtocol dynamic_object(std::string kind, Muscle attach) {
  return {ObjectMode::dynamic, std::move(kind), attach};
}
inline ObjectProtocol fixture(std::string kind) { return {ObjectMode::fixture, std::move(kind)}; }

}  // namespace library_detail

/// The 35 action categories in table order: 21 shared with HMDB-51, 10
/// one-person synthetic actions and 4 two-people actions.
inline std::vector<ActionSpec> default_action_specs() {
  using namespace library_detail;
  const auto H = ActionClass::sub_hmdb;
  const auto O = ActionClass::one_person;
  const auto T = ActionClass::two_people;
  std::vector<ActionSpec> s{
      spec("brush hair", H, {"brush(ing)? (the |her |his )?hair"}, kArmR + kHead,
           dynamic_object("brush", M::hand_r)),
      spec("catch", H, {"\\bcatch(ing)?\\b"}, kArms + MuscleSet{M::spine},
           dynamic_object("ball", M::hand_r)),
      spec("clap", H, {"\\bclap(ping)?\\b"}, kArms + MuscleSet{M::spine}),
      spec("climb stairs", H, {"climb(ing)? (up )?(the )?stairs", "stair ascent"},
           kLegs + MuscleSet{M::pelvis}, fixture("stairs")),
      spec("golf", H, {"\\bgolf\\b"}, kArms + kCore, dynamic_object("club", M::hand_r)),
      spec("jump", H, {"\\bjump(ing)? (in place|forward|high)"}, kLegs + kCore),
      spec("kick ball", H, {"kick(ing)? (a |the )?ball"}, kLegs + MuscleSet{M::pelvis},
           dynamic_object("ball", M::foot_r)),
      spec("push", H, {"\\bpush(ing)? (a |the )?(crate|box|cart)"}, kArms + kCore,
           dynamic_object("crate", M::hand_r)),
      spec("pick", H, {"pick(ing)? up", "\\bpick (an|the) object"},
           kArmR + kCore + MuscleSet{M::thigh_l, M::thigh_r, M::calf_l, M::calf_r},
           dynamic_object("object", M::hand_r)),
      spec("pour", H, {"\\bpour(ing)?\\b"}, kArms, dynamic_object("bottle", M::hand_r)),
      spec("pull up", H, {"pull[- ]?ups?\\b"}, kArms + MuscleSet{M::spine}, fixture("bar")),
      spec("run", H, {"^run(ning)? ", "\\bjog(ging)?\\b"}, kLegs + MuscleSet{M::pelvis}),
      spec("shoot ball", H, {"shoot(ing)? (a |the )?basketball", "jump shot"}, kArms + kCore,
           dynamic_object("ball", M::hand_r)),
      spec("shoot bow", H, {"\\b(bow|archery)\\b"}, kArms + kCore + kHead,
           dynamic_object("bow", M::hand_l)),
      spec("shoot gun", H, {"\\b(pistol|handgun|rifle)\\b"}, kArms + kHead,
           dynamic_object("gun", M::hand_r)),
      spec("sit", H, {"\\bsit(ting)? down\\b"}, kLegs + kCore, fixture("bench")),
      spec("stand", H, {"\\bstand(ing)? up\\b"}, kLegs + kCore),
      spec("swing baseball", H, {"baseball (bat )?swing", "swing(ing)? (a |the )?bat"},
           kArms + kCore, dynamic_object("bat", M::hand_r)),
      spec("throw", H, {"\\bthrow(ing)?\\b"}, kArmR + kCore, dynamic_object("ball", M::hand_r)),
      spec("walk", H, {"\\bwalk(ing)?\\b(?! ?(hug|hold|the line))"}, kLegs + MuscleSet{M::pelvis}),
      spec("wave", H, {"\\bwav(e|ing)\\b"}, kArmR),
      spec("car hit", O, {"hit by (a )?car", "struck by (a )?(car|vehicle)"},
           kLegs + kCore + kHead),
      spec("crawl", O, {"\\bcrawl(ing)?\\b"}, kArms + kLegs + MuscleSet{M::pelvis}),
      spec("dive floor", O, {"dive (to|onto) (the )?floor", "floor dive"}, kArms + kCore),
      spec("flee", O, {"\\bflee(ing)?\\b", "run(ning)? away"}, kLegs + MuscleSet{M::pelvis} + kHead),
      spec("hop", O, {"\\bhop(ping)?\\b"}, kLegs + MuscleSet{M::pelvis}),
      spec("leg split", O, {"\\bsplits?\\b"}, kLegs + MuscleSet{M::pelvis}),
      spec("limp", O, {"\\blimp(ing)?\\b"}, kLegs + MuscleSet{M::pelvis}),
      spec("moonwalk", O, {"moon ?walk"}, kLegs + MuscleSet{M::pelvis}),
      spec("stagger", O, {"\\bstagger(ing)?\\b"}, kLegs + kCore),
      spec("surrender", O, {"\\bsurrender(ing)?\\b", "hands up"}, kArms),
      spec("walking hug", T, {"walking hug", "\\band hug\\b"},
           kArms + kLegs + kCore),
      spec("walk hold hands", T, {"hold(ing)? hands"}, kLegs + MuscleSet{M::pelvis} + kArmR),
      spec("walk the line", T, {"walk(ing)? the line"}, kLegs + MuscleSet{M::pelvis}),
      spec("bump into each other", T, {"bump(ing)? into each other", "shoulder collision"},
           kLegs + kCore)};

  auto set_support = [&](std::string_view name, Vec3 offset, double heading, bool event) {
    for (auto& a : s)
      if (a.name == name) {
        a.supporting_offset = offset;
        a.supporting_heading_deg = heading;
        a.scripted_event = event;
      }
  };
  set_support("walking hug", Vec3(0.0, 0.0, 2.5), 180.0, false);
  set_support("walk hold hands", Vec3(-0.6, 0.0, 0.0), 0.0, false);
  set_support("walk the line", Vec3(0.0, 0.0, -1.5), 0.0, false);
  set_support("bump into each other", Vec3(0.0, 0.0, 5.0), 180.0, true);
  set_support("car hit", Vec3::Zero(), 0.0, true);
  return s;
}

/// Procedural clips standing in for the captured and authored motion set.
inline std::vector<MotionClip> default_clips() {
  using namespace library_detail;
  using S = MotionSource;
  Builder b;

  // brush hair
  for (int v = 0; v < 2; ++v) {
    const double f = v == 0 ? 1.2 : 1.8;
    b.add("brush_hair", S::mocap, v == 0 ? "brush hair slowly standing" : "brushing her hair quickly",
          v == 0 ? 10.0 : 8.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double s = std::sin(kTau * f * t);
            p[M::upper_arm_r].x() = -140.0 + 10.0 * s;
            p[M::upper_arm_r].z() = -35.0;
            p[M::forearm_r].x() = -110.0 + 15.0 * s;
            p[M::hand_r].x() = 30.0 * s;
            p[M::head].z() = 8.0 + 4.0 * s;
          });
  }
  // catch
  for (int v = 0; v < 2; ++v) {
    const double tc = v == 0 ? 3.0 : 4.5;
    b.add("catch", S::mocap, v == 0 ? "catch a ball thrown at chest" : "catching an overhead pass",
          v == 0 ? 8.0 : 12.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double reach = ramp(t, tc - 1.0, tc) * (1.0 - ramp(t, tc + 0.5, tc + 1.5));
            const double up = v == 0 ? 80.0 : 150.0;
            p[M::upper_arm_l].x() = -up * reach;
            p[M::upper_arm_r].x() = -up * reach;
            p[M::forearm_l].x() = -20.0 - 50.0 * ramp(t, tc, tc + 0.3);
            p[M::forearm_r].x() = -20.0 - 50.0 * ramp(t, tc, tc + 0.3);
            p[M::spine].x() = 10.0 * reach;
            p[M::calf_l].x() = p[M::calf_r].x() = 15.0 * reach;
            p[M::thigh_l].x() = p[M::thigh_r].x() = -10.0 * reach;
          });
  }
  // clap
  for (int v = 0; v < 2; ++v) {
    const double f = v == 0 ? 2.0 : 3.0;
    b.add("clap", S::mocap, v == 0 ? "clap hands applause" : "clapping above head excitedly",
          v == 0 ? 6.0 : 10.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double s = 0.5 + 0.5 * std::sin(kTau * f * t);
            const double lift = v == 0 ? -60.0 : -150.0;
            p[M::upper_arm_l].x() = lift;
            p[M::upper_arm_r].x() = lift;
            p[M::upper_arm_l].z() = 25.0 * s;
            p[M::upper_arm_r].z() = -25.0 * s;
            p[M::forearm_l].x() = -70.0;
            p[M::forearm_r].x() = -70.0;
            p[M::hand_l].z() = -20.0;
            p[M::hand_r].z() = 20.0;
          });
  }
  // climb stairs
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.freq = v == 0 ? 0.7 : 0.9;
    g.hip = 45.0;
    g.knee = 70.0;
    g.speed = 0.45;
    g.lean = 10.0;
    b.add("climb_stairs", S::mocap, v == 0 ? "climb stairs steadily" : "climbing up the stairs two at a time",
          v == 0 ? 10.0 : 8.0, [=](double t, Pose& p) {
            gait(t, g, p);
            p[M::thigh_l].x() -= 20.0;
            p[M::thigh_r].x() -= 20.0;
            p.root.y() += 0.17 * 2.0 * g.freq * t;
          });
  }
  // golf
  for (int v = 0; v < 2; ++v) {
    const double period = v == 0 ? 4.0 : 3.0;
    b.add("golf", S::mocap, v == 0 ? "golf swing full drive" : "golf putt and chip practice",
          v == 0 ? 12.0 : 8.0, [=](double t, Pose& p) {
            const double ph = std::fmod(t, period) / period;
            const double swing = ph < 0.6 ? -ramp(ph, 0.1, 0.6) : -1.0 + 2.0 * ramp(ph, 0.6, 0.75);
            const double amp = v == 0 ? 1.0 : 0.35;
            p[M::spine].x() = 30.0;
            p[M::upper_arm_l].x() = -60.0;
            p[M::upper_arm_r].x() = -60.0;
            p[M::upper_arm_l].z() = -20.0 + 90.0 * amp * std::max(0.0, -swing);
            p[M::upper_arm_r].z() = -90.0 * amp * std::max(0.0, swing);
            p[M::forearm_l].x() = -10.0;
            p[M::forearm_r].x() = -25.0;
            p[M::spine].y() = 50.0 * amp * swing;
            p[M::pelvis].y() = 25.0 * amp * swing;
            p[M::calf_l].x() = p[M::calf_r].x() = 15.0;
            p[M::thigh_l].x() = p[M::thigh_r].x() = -15.0;
            p[M::head].x() = 20.0;
          });
  }
  // jump
  for (int v = 0; v < 2; ++v) {
    const double period = v == 0 ? 1.6 : 2.2;
    b.add("jump", S::mocap, v == 0 ? "jump in place repeatedly" : "jumping forward long jump",
          v == 0 ? 6.0 : 10.0, [=](double t, Pose& p) {
            const double ph = std::fmod(t, period) / period;
            const double crouch = std::exp(-std::pow((ph - 0.25) / 0.12, 2));
            const double air = ph > 0.35 && ph < 0.75 ? std::sin(std::numbers::pi * (ph - 0.35) / 0.4) : 0.0;
            p[M::thigh_l].x() = p[M::thigh_r].x() = -60.0 * crouch - 20.0 * air;
            p[M::calf_l].x() = p[M::calf_r].x() = 100.0 * crouch + 30.0 * air;
            p[M::spine].x() = 30.0 * crouch;
            p[M::upper_arm_l].x() = p[M::upper_arm_r].x() = 40.0 * crouch - 120.0 * air;
            p[M::forearm_l].x() = p[M::forearm_r].x() = -20.0;
            p.root.y() = -0.3 * crouch + 0.45 * air;
            if (v == 1) p.root.z() = 0.9 * std::floor(t / period) + 0.9 * ramp(ph, 0.35, 0.75);
          });
  }
  // kick ball
  for (int v = 0; v < 2; ++v) {
    const double tk = v == 0 ? 2.0 : 3.5;
    b.add("kick_ball", S::mocap, v == 0 ? "kick ball with right foot" : "kicking the ball after run up",
          v == 0 ? 8.0 : 10.0, [=](double t, Pose& p) {
            if (v == 1 && t < tk - 0.8) {
              Gait g;
              g.speed = 2.0;
              g.freq = 1.3;
              gait(t, g, p);
            } else {
              stand_idle(t, p);
              if (v == 1) p.root.z() = 2.0 * (tk - 0.8);
            }
            const double back = ramp(t, tk - 0.8, tk - 0.2) * (1.0 - ramp(t, tk - 0.2, tk));
            const double fwd = ramp(t, tk - 0.2, tk) * (1.0 - ramp(t, tk + 0.3, tk + 1.2));
            p[M::thigh_r].x() += 40.0 * back - 85.0 * fwd;
            p[M::calf_r].x() += 90.0 * back + 10.0 * fwd;
            p[M::upper_arm_l].z() += 40.0 * fwd;
            p[M::spine].x() -= 10.0 * fwd;
          });
  }
  // push
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.speed = v == 0 ? 0.5 : 0.3;
    g.freq = 0.6;
    g.hip = 20.0;
    g.lean = 30.0;
    b.add("push", S::mocap, v == 0 ? "push a crate forward" : "pushing the cart slowly uphill",
          v == 0 ? 10.0 : 15.0, [=](double t, Pose& p) {
            gait(t, g, p);
            p[M::upper_arm_l].x() = p[M::upper_arm_r].x() = -85.0;
            p[M::forearm_l].x() = p[M::forearm_r].x() = -35.0;
            p[M::hand_l].x() = p[M::hand_r].x() = -50.0;
            p[M::upper_arm_l].z() = p[M::upper_arm_r].z() = 0.0;
          });
  }
  // pick
  for (int v = 0; v < 2; ++v) {
    const double period = v == 0 ? 4.0 : 6.0;
    b.add("pick", S::mocap, v == 0 ? "pick up an item from the floor" : "bend and pick the object",
          v == 0 ? 8.0 : 12.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double ph = std::fmod(t, period) / period;
            const double bend = std::sin(std::numbers::pi * ph);
            p[M::spine].x() = 70.0 * bend;
            p[M::thigh_l].x() = p[M::thigh_r].x() = -55.0 * bend;
            p[M::calf_l].x() = p[M::calf_r].x() = 75.0 * bend;
            p[M::upper_arm_r].x() = -60.0 * bend;
            p[M::forearm_r].x() = -10.0;
            p[M::head].x() = 20.0 * bend;
            p.root.y() = -0.18 * bend;
          });
  }
  // pour
  for (int v = 0; v < 2; ++v) {
    b.add("pour", S::mocap, v == 0 ? "pour water into a glass" : "pouring from a bottle while standing",
          v == 0 ? 8.0 : 10.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double tilt = std::sin(kTau * (v == 0 ? 0.25 : 0.2) * t);
            p[M::upper_arm_r].x() = -55.0;
            p[M::forearm_r].x() = -70.0;
            p[M::hand_r].z() = 28.0 * tilt;
            p[M::hand_r].y() = 10.0 * tilt;
            p[M::upper_arm_l].x() = -40.0;
            p[M::forearm_l].x() = -80.0;
            p[M::head].x() = 15.0;
          });
  }
  // pull up
  for (int v = 0; v < 2; ++v) {
    const double f = v == 0 ? 0.4 : 0.6;
    b.add("pull_up", S::mocap, v == 0 ? "pull ups on a bar" : "pull-up repetitions wide grip",
          v == 0 ? 12.0 : 10.0, [=](double t, Pose& p) {
            const double up = 0.5 - 0.5 * std::cos(kTau * f * t);
            p[M::upper_arm_l].x() = p[M::upper_arm_r].x() = -175.0 + 40.0 * up;
            p[M::upper_arm_l].z() = v == 0 ? 10.0 : 30.0;
            p[M::upper_arm_r].z() = v == 0 ? -10.0 : -30.0;
            p[M::forearm_l].x() = p[M::forearm_r].x() = -120.0 * up;
            p[M::calf_l].x() = p[M::calf_r].x() = 40.0;
            p[M::thigh_l].x() = p[M::thigh_r].x() = -10.0;
            p.root.y() = 0.45 + 0.45 * up;
          });
  }
  // run
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.freq = v == 0 ? 1.4 : 1.2;
    g.hip = 45.0;
    g.knee = 95.0;
    g.arm = 40.0;
    g.elbow = -85.0;
    g.speed = v == 0 ? 4.5 : 3.0;
    g.lean = 12.0;
    g.bob = 0.05;
    b.add("run", S::mocap, v == 0 ? "run fast straight ahead" : "jogging at an easy pace",
          v == 0 ? 8.0 : 15.0, [=](double t, Pose& p) { gait(t, g, p); });
  }
  // shoot ball
  for (int v = 0; v < 2; ++v) {
    const double period = v == 0 ? 3.0 : 4.0;
    b.add("shoot_ball", S::mocap, v == 0 ? "shoot a basketball from the free line" : "jump shot from the wing",
          v == 0 ? 10.0 : 8.0, [=](double t, Pose& p) {
            const double ph = std::fmod(t, period) / period;
            const double load = std::exp(-std::pow((ph - 0.3) / 0.12, 2));
            const double release = ramp(ph, 0.35, 0.5) * (1.0 - ramp(ph, 0.7, 0.95));
            p[M::thigh_l].x() = p[M::thigh_r].x() = -40.0 * load;
            p[M::calf_l].x() = p[M::calf_r].x() = 70.0 * load;
            p[M::upper_arm_l].x() = p[M::upper_arm_r].x() = -90.0 - 70.0 * release;
            p[M::forearm_l].x() = p[M::forearm_r].x() = -100.0 * (1.0 - release) - 10.0;
            p[M::hand_r].x() = 60.0 * release;
            p[M::spine].x() = 10.0 * load;
            p.root.y() = -0.2 * load + (v == 1 ? 0.35 * release : 0.0);
          });
  }
  // shoot bow
  for (int v = 0; v < 2; ++v) {
    const double period = v == 0 ? 5.0 : 4.0;
    b.add("shoot_bow", S::mocap, v == 0 ? "archery draw and release" : "shooting a bow standing sideways",
          v == 0 ? 10.0 : 12.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double draw = ramp(std::fmod(t, period), 0.5, 2.5) *
                                (1.0 - ramp(std::fmod(t, period), 3.2, 3.4));
            p[M::upper_arm_l].x() = -90.0;
            p[M::upper_arm_l].z() = 30.0;
            p[M::upper_arm_r].x() = -90.0;
            p[M::upper_arm_r].z() = 20.0 * draw - 10.0;
            p[M::forearm_r].x() = -140.0 * draw;
            p[M::head].y() = 60.0;
            p[M::spine].y() = -30.0;
            p[M::pelvis].y() = -20.0;
          });
  }
  // shoot gun
  for (int v = 0; v < 2; ++v) {
    b.add("shoot_gun", S::mocap, v == 0 ? "aim and fire a pistol" : "firing a rifle from the shoulder",
          v == 0 ? 8.0 : 10.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double kick = std::max(0.0, std::sin(kTau * 0.7 * t)) > 0.97 ? 1.0 : 0.0;
            p[M::upper_arm_r].x() = -90.0 - 8.0 * kick;
            p[M::forearm_r].x() = v == 0 ? -5.0 : -60.0;
            p[M::upper_arm_l].x() = v == 0 ? -80.0 : -75.0;
            p[M::upper_arm_l].z() = v == 0 ? -25.0 : -10.0;
            p[M::forearm_l].x() = v == 0 ? -20.0 : -40.0;
            p[M::head].x() = 10.0;
            p[M::head].y() = v == 0 ? 0.0 : -15.0;
          });
  }
  // sit
  for (int v = 0; v < 2; ++v) {
    const double t0 = v == 0 ? 1.0 : 2.0;
    b.add("sit", S::mocap, v == 0 ? "sit down on a bench" : "sitting down slowly and resting",
          v == 0 ? 8.0 : 12.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            seat(ramp(t, t0, t0 + (v == 0 ? 1.5 : 3.0)), p);
          });
  }
  // stand
  for (int v = 0; v < 2; ++v) {
    const double t0 = v == 0 ? 1.0 : 2.5;
    b.add("stand", S::mocap, v == 0 ? "stand up from a chair" : "standing up then looking around",
          v == 0 ? 6.0 : 10.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            seat(1.0 - ramp(t, t0, t0 + 1.5), p);
          });
  }
  // swing baseball
  for (int v = 0; v < 2; ++v) {
    const double period = v == 0 ? 3.0 : 4.0;
    b.add("swing_baseball", S::mocap, v == 0 ? "baseball bat swing" : "swinging a bat at a pitch",
          v == 0 ? 8.0 : 12.0, [=](double t, Pose& p) {
            const double ph = std::fmod(t, period) / period;
            const double swing = -1.0 + 2.0 * ramp(ph, 0.5, 0.62);
            p[M::upper_arm_l].x() = p[M::upper_arm_r].x() = -70.0;
            p[M::upper_arm_l].z() = -20.0;
            p[M::upper_arm_r].z() = 20.0;
            p[M::forearm_l].x() = p[M::forearm_r].x() = -90.0 + 50.0 * ramp(ph, 0.5, 0.6);
            p[M::spine].y() = 55.0 * swing;
            p[M::pelvis].y() = 30.0 * swing;
            p[M::head].y() = -40.0 * swing;
            p[M::thigh_l].x() = p[M::thigh_r].x() = -20.0;
            p[M::calf_l].x() = p[M::calf_r].x() = 25.0;
          });
  }
  // throw
  for (int v = 0; v < 2; ++v) {
    const double period = v == 0 ? 3.0 : 5.0;
    b.add("throw", S::mocap, v == 0 ? "throw a ball overhand" : "throwing a stone far",
          v == 0 ? 6.0 : 10.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double ph = std::fmod(t, period) / period;
            const double wind = ramp(ph, 0.1, 0.5) * (1.0 - ramp(ph, 0.5, 0.6));
            const double release = ramp(ph, 0.5, 0.6) * (1.0 - ramp(ph, 0.8, 1.0));
            p[M::upper_arm_r].x() = 50.0 * wind - 150.0 * release;
            p[M::upper_arm_r].z() = -60.0 * wind;
            p[M::forearm_r].x() = -100.0 * wind - 20.0 * release;
            p[M::spine].y() = -35.0 * wind + 30.0 * release;
            p[M::spine].x() = 20.0 * release;
            p[M::upper_arm_l].x() = -60.0 * wind;
            p[M::thigh_l].x() = -30.0 * release;
          });
  }
  // walk
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.freq = v == 0 ? 0.8 : 1.0;
    g.speed = v == 0 ? 0.9 : 1.5;
    g.hip = v == 0 ? 20.0 : 28.0;
    b.add("walk", S::mocap, v == 0 ? "walk forward slowly" : "walking briskly across a plaza",
          v == 0 ? 15.0 : 10.0, [=](double t, Pose& p) { gait(t, g, p); });
  }
  // wave
  for (int v = 0; v < 2; ++v) {
    const double f = v == 0 ? 1.5 : 2.2;
    b.add("wave", S::mocap, v == 0 ? "wave hello with right hand" : "waving goodbye enthusiastically",
          v == 0 ? 6.0 : 8.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double up = ramp(t, 0.3, 1.0);
            p[M::upper_arm_r].z() = -150.0 * up;
            p[M::forearm_r].x() = -30.0 * up + 25.0 * up * std::sin(kTau * f * t) - 25.0 * up;
            p[M::hand_r].z() = 20.0 * up * std::sin(kTau * f * t);
          });
  }
  // A short flick below the minimum duration; never admissible at T_min = 1.
  b.add("wave", S::artist, "quick wave flick", 0.8, [](double t, Pose& p) {
    stand_idle(t, p);
    p[M::upper_arm_r].z() = -120.0;
    p[M::forearm_r].x() = -40.0 * std::sin(kTau * 2.5 * t) - 40.0;
  });

  // car hit
  for (int v = 0; v < 2; ++v) {
    const double th = v == 0 ? 4.0 : 5.0;
    Gait g;
    g.speed = 1.3;
    b.add("car_hit", S::programmed, v == 0 ? "pedestrian hit by car and falls" : "struck by a vehicle while crossing",
          v == 0 ? 10.0 : 12.0, [=](double t, Pose& p) {
            if (t < th) {
              gait(t, g, p);
              return;
            }
            Pose pre;
            gait(th, g, pre);
            const double fall = ramp(t, th, th + 0.8);
            p = pre;
            p[M::pelvis].x() = -85.0 * fall;
            p[M::spine].x() = -20.0 * fall;
            p[M::head].x() = 25.0 * fall;
            p[M::upper_arm_l].z() = 90.0 * fall;
            p[M::upper_arm_r].z() = -90.0 * fall;
            p[M::thigh_l].x() = -30.0 * fall;
            p[M::thigh_r].x() = 10.0 * fall;
            p[M::calf_l].x() = 20.0 * fall;
            p.root = pre.root + Vec3((v == 0 ? 1.5 : -1.2) * fall, -0.85 * fall, 0.6 * fall);
          });
  }
  // crawl
  for (int v = 0; v < 2; ++v) {
    const double f = v == 0 ? 0.6 : 0.9;
    b.add("crawl", S::programmed, v == 0 ? "crawl on hands and knees" : "crawling forward under cover",
          v == 0 ? 12.0 : 10.0, [=](double t, Pose& p) {
            const double s = std::sin(kTau * f * t);
            p[M::pelvis].x() = 85.0;
            p[M::spine].x() = -10.0;
            p[M::head].x() = -45.0;
            p[M::upper_arm_l].x() = -85.0 + 25.0 * s;
            p[M::upper_arm_r].x() = -85.0 - 25.0 * s;
            p[M::thigh_l].x() = -90.0 - 20.0 * s;
            p[M::thigh_r].x() = -90.0 + 20.0 * s;
            p[M::calf_l].x() = p[M::calf_r].x() = 90.0;
            p[M::foot_l].x() = p[M::foot_r].x() = 30.0;
            p.root = Vec3(0.0, -0.45, 0.35 * f * t);
          });
  }
  // dive floor; the second capture is left unclamped and over-rotates the pelvis
  for (int v = 0; v < 2; ++v) {
    const double td = v == 0 ? 2.0 : 3.0;
    b.add("dive_floor", v == 0 ? S::programmed : S::mocap,
          v == 0 ? "dive to the floor for cover" : "floor dive mocap take",
          v == 0 ? 8.0 : 10.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double d = ramp(t, td, td + 0.7);
            p[M::pelvis].x() = (v == 0 ? 85.0 : 94.0) * d;
            p[M::upper_arm_l].x() = p[M::upper_arm_r].x() = -170.0 * d;
            p[M::spine].x() = -15.0 * d;
            p[M::head].x() = -40.0 * d;
            p[M::thigh_l].x() = p[M::thigh_r].x() = 10.0 * d;
            p.root = Vec3(0.0, -0.8 * d, 1.2 * d);
          },
          v == 1);
  }
  // flee
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.freq = 1.5;
    g.hip = 45.0;
    g.knee = 95.0;
    g.arm = 45.0;
    g.elbow = -80.0;
    g.speed = 5.0;
    g.lean = 15.0;
    g.bob = 0.05;
    b.add("flee", S::programmed, v == 0 ? "flee in panic looking back" : "fleeing from danger in terror",
          v == 0 ? 8.0 : 10.0, [=](double t, Pose& p) {
            gait(t, g, p);
            p[M::head].y() = (v == 0 ? 70.0 : 35.0) * std::sin(kTau * 0.3 * t);
          });
  }
  // hop
  for (int v = 0; v < 2; ++v) {
    const double f = v == 0 ? 1.5 : 1.1;
    b.add("hop", S::programmed, v == 0 ? "hop on left leg" : "hopping forward on one foot",
          v == 0 ? 6.0 : 10.0, [=](double t, Pose& p) {
            const double ph = std::fmod(t * f, 1.0);
            const double air = std::sin(std::numbers::pi * ph);
            p[M::thigh_r].x() = -45.0;
            p[M::calf_r].x() = 80.0;
            p[M::thigh_l].x() = -15.0 * (1.0 - air);
            p[M::calf_l].x() = 35.0 * (1.0 - air);
            p[M::upper_arm_l].z() = 30.0;
            p[M::upper_arm_r].z() = -30.0;
            p[M::forearm_l].x() = p[M::forearm_r].x() = -40.0;
            p.root = Vec3(0.0, 0.15 * air, v == 1 ? 0.5 * f * t : 0.0);
          });
  }
  // leg split; the mocap take overshoots the hip abduction limit
  for (int v = 0; v < 2; ++v) {
    b.add("leg_split", v == 0 ? S::artist : S::mocap,
          v == 0 ? "side splits stretch" : "leg split gymnast mocap",
          v == 0 ? 10.0 : 12.0, [=](double t, Pose& p) {
            const double s = ramp(t, 1.0, 4.0) * (1.0 - ramp(t, 8.0, 10.0));
            const double abd = v == 0 ? 78.0 : 86.0;
            p[M::thigh_l].z() = abd * s;
            p[M::thigh_r].z() = -abd * s;
            p[M::upper_arm_l].z() = 80.0 * s;
            p[M::upper_arm_r].z() = -80.0 * s;
            p[M::foot_l].x() = p[M::foot_r].x() = 30.0 * s;
            p.root.y() = -0.78 * s;
          },
          v == 1);
  }
  // limp
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.freq = 0.6;
    g.speed = 0.6;
    b.add("limp", S::programmed, v == 0 ? "limp dragging left leg" : "limping with an injured knee",
          v == 0 ? 12.0 : 15.0, [=](double t, Pose& p) {
            gait(t, g, p);
            p[M::calf_l].x() = 5.0;
            p[M::thigh_l].x() *= 0.5;
            p[M::spine].z() = 10.0 * std::sin(kTau * g.freq * t);
            p[M::pelvis].z() = (v == 0 ? 8.0 : 12.0) * std::sin(kTau * g.freq * t);
          });
  }
  // moonwalk
  for (int v = 0; v < 2; ++v) {
    const double f = v == 0 ? 0.8 : 1.0;
    b.add("moonwalk", S::artist, v == 0 ? "moonwalk backwards glide" : "moonwalking dance sequence",
          v == 0 ? 10.0 : 8.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double s = std::sin(kTau * f * t);
            p[M::calf_l].x() = 40.0 * std::max(0.0, s);
            p[M::calf_r].x() = 40.0 * std::max(0.0, -s);
            p[M::thigh_l].x() = -20.0 * std::max(0.0, s);
            p[M::thigh_r].x() = -20.0 * std::max(0.0, -s);
            p[M::foot_l].x() = 35.0 * std::max(0.0, s);
            p[M::foot_r].x() = 35.0 * std::max(0.0, -s);
            p[M::forearm_l].x() = p[M::forearm_r].x() = -60.0;
            p.root.z() = -0.6 * t;
          });
  }
  // stagger; the mocap take leans past the spine roll limit
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.freq = 0.5;
    g.speed = 0.5;
    g.hip = 15.0;
    b.add("stagger", v == 0 ? S::programmed : S::mocap,
          v == 0 ? "stagger drunkenly" : "staggering mocap take",
          v == 0 ? 10.0 : 12.0, [=](double t, Pose& p) {
            gait(t, g, p);
            const double sway = std::sin(kTau * 0.35 * t) + 0.5 * std::sin(kTau * 0.9 * t);
            p[M::spine].z() = (v == 0 ? 20.0 : 30.0) * sway;
            p[M::pelvis].z() = 8.0 * sway;
            p[M::head].z() = -10.0 * sway;
            p[M::upper_arm_l].z() = 20.0 + 15.0 * std::max(0.0, sway);
            p[M::upper_arm_r].z() = -20.0 - 15.0 * std::max(0.0, -sway);
            p.root.x() = 0.3 * sway;
          },
          v == 1);
  }
  // surrender
  for (int v = 0; v < 2; ++v) {
    b.add("surrender", S::programmed, v == 0 ? "surrender raising both arms" : "hands up kneel and surrender",
          v == 0 ? 8.0 : 12.0, [=](double t, Pose& p) {
            stand_idle(t, p);
            const double up = ramp(t, 0.5, 1.5);
            p[M::upper_arm_l].z() = 160.0 * up;
            p[M::upper_arm_r].z() = -160.0 * up;
            p[M::forearm_l].x() = p[M::forearm_r].x() = -40.0 * up;
            if (v == 1) {
              const double k = ramp(t, 3.0, 5.0);
              p[M::thigh_l].x() = p[M::thigh_r].x() = -5.0 * k;
              p[M::calf_l].x() = p[M::calf_r].x() = 95.0 * k;
              p[M::foot_l].x() = p[M::foot_r].x() = 40.0 * k;
              p.root.y() = -0.44 * k;
            }
          });
  }
  // walking hug
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.speed = 0.9;
    const double th = v == 0 ? 2.0 : 3.0;
    b.add("walking_hug", S::programmed, v == 0 ? "walking hug greeting a friend" : "approach and hug warmly",
          v == 0 ? 8.0 : 10.0, [=](double t, Pose& p) {
            if (t < th) {
              gait(t, g, p);
            } else {
              stand_idle(t, p);
              p.root.z() = g.speed * th;
            }
            const double hug = ramp(t, th - 0.5, th + 0.5) * (1.0 - ramp(t, th + 3.0, th + 4.0));
            p[M::upper_arm_l].x() = p[M::upper_arm_r].x() = -80.0 * hug + (1.0 - hug) * p[M::upper_arm_l].x();
            p[M::upper_arm_l].z() = -20.0 * hug + 6.0 * (1.0 - hug);
            p[M::upper_arm_r].z() = 20.0 * hug - 6.0 * (1.0 - hug);
            p[M::forearm_l].x() = p[M::forearm_r].x() = -70.0 * hug - 15.0;
            p[M::forearm_l].y() = 40.0 * hug;
            p[M::forearm_r].y() = -40.0 * hug;
            p[M::head].y() = 25.0 * hug;
          });
  }
  // walk hold hands
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.speed = v == 0 ? 1.0 : 0.8;
    g.freq = v == 0 ? 0.85 : 0.75;
    b.add("walk_hold_hands", S::programmed, v == 0 ? "couple holding hands stroll" : "hold hands and stroll in a park",
          v == 0 ? 15.0 : 12.0, [=](double t, Pose& p) {
            gait(t, g, p);
            p[M::upper_arm_r].x() = -10.0;
            p[M::upper_arm_r].z() = -25.0;
            p[M::forearm_r].x() = -20.0;
            p[M::head].y() = -20.0 * std::max(0.0, std::sin(kTau * 0.1 * t));
          });
  }
  // walk the line
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.speed = 0.5;
    g.freq = 0.5;
    g.hip = 18.0;
    b.add("walk_the_line", S::programmed, v == 0 ? "walk the line heel to toe" : "walking the line sobriety test",
          v == 0 ? 10.0 : 12.0, [=](double t, Pose& p) {
            gait(t, g, p);
            const double s = std::sin(kTau * g.freq * t);
            p[M::thigh_l].z() = -8.0 * (s > 0 ? s : 0.0);
            p[M::thigh_r].z() = 8.0 * (s < 0 ? -s : 0.0);
            p[M::upper_arm_l].z() = v == 0 ? 60.0 : 10.0;
            p[M::upper_arm_r].z() = v == 0 ? -60.0 : -10.0;
            p[M::head].x() = 25.0;
          });
  }
  // bump into each other
  for (int v = 0; v < 2; ++v) {
    Gait g;
    g.speed = 1.3;
    const double tb = v == 0 ? 2.0 : 2.5;
    b.add("bump", S::programmed, v == 0 ? "bump into each other distracted" : "shoulder collision on sidewalk",
          v == 0 ? 8.0 : 10.0, [=](double t, Pose& p) {
            if (t < tb) {
              gait(t, g, p);
              return;
            }
            Pose pre;
            gait(tb, g, pre);
            p = pre;
            const double recoil = ramp(t, tb, tb + 0.4) * (1.0 - ramp(t, tb + 1.2, tb + 2.5));
            p[M::spine].x() = -20.0 * recoil;
            p[M::spine].y() = (v == 0 ? 25.0 : -35.0) * recoil;
            p[M::thigh_l].x() = 20.0 * recoil;
            p[M::upper_arm_l].z() = 40.0 * recoil;
            p[M::upper_arm_r].z() = -40.0 * recoil;
            p[M::head].x() = 15.0 * recoil;
            p.root = pre.root + Vec3(0.0, 0.0, -0.4 * ramp(t, tb, tb + 0.6));
          });
  }
  return std::move(b.clips);
}

inline MotionLibrary default_library() { return MotionLibrary(default_action_specs(), default_clips()); }

}  // namespace phav
