#pragma once

// Posing a keyframed clip on the ragdoll: per-frame forward kinematics and
// angular limit enforcement on rotation channels.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "phav/motion.hpp"
#include "phav/skeleton.hpp"

namespace phav {

using RotationChannels = std::array<RotationTrack, kMuscleCount>;

/// Local rotation matrices of every muscle at time t.
inline std::array<Mat3, kMuscleCount> clip_local_rotations(const MotionClip& clip, double t) {
  std::array<Mat3, kMuscleCount> out;
  for (std::size_t m = 0; m < kMuscleCount; ++m)
    out[m] = euler_deg_to_matrix(clip.rotation_at(static_cast<Muscle>(m), t));
  return out;
}

/// World positions of the 15 muscles at time t. The clip's root track is a
/// translation in the placement frame; orbit offsets displace single muscle
/// bodies without affecting their children.
inline std::array<Vec3, kMuscleCount> clip_world_positions(const MotionClip& clip,
                                                           const RootPlacement& placement,
                                                           double t) {
  const auto rotations = clip_local_rotations(clip, t);
  const RigidTransform place = placement.transform();
  const RigidTransform root = place.compose(RigidTransform{Mat3::Identity(), clip.root_at(t)});
  const auto world = forward_kinematics(clip.skeleton.skeleton(), rotations, root);
  std::array<Vec3, kMuscleCount> out;
  for (std::size_t m = 0; m < kMuscleCount; ++m) out[m] = world[m];
  for (const auto& orbit : clip.orbits)
    out[static_cast<std::size_t>(orbit.muscle)] += place.rotation * orbit.offset(t);
  return out;
}

/// Number of frames a clip spans when sampled at `fps`.
inline std::size_t clip_frame_count(const MotionClip& clip, double fps) {
  return static_cast<std::size_t>(std::llround(clip.duration * fps));
}

/// World joint positions of frame `frame`, sampled at time frame / fps.
inline std::array<Vec3, kMuscleCount> forward_kinematics(const MotionClip& clip,
                                                         const RootPlacement& placement,
                                                         std::size_t frame, double fps) {
  if (!(fps > 0.0)) throw std::invalid_argument("forward_kinematics: fps must be positive");
  const std::size_t n = clip_frame_count(clip, fps);
  if (frame >= n)
    throw std::out_of_range("forward_kinematics: frame " + std::to_string(frame) +
                            " outside clip '" + clip.id + "' (" + std::to_string(n) + " frames)");
  return clip_world_positions(clip, placement, static_cast<double>(frame) / fps);
}

struct PoseFrame {
  std::array<Vec3, kMuscleCount> positions;  ///< world, meters
  std::array<Vec3, kMuscleCount> rotations;  ///< local Euler, degrees
};

struct PoseTrack {
  double fps = 30.0;
  std::vector<PoseFrame> frames;
};

/// Samples `clip` for round(duration * fps) frames.
inline PoseTrack compute_pose_track(const MotionClip& clip, const RootPlacement& placement,
                                    double duration, double fps) {
  if (!(fps > 0.0)) throw std::invalid_argument("compute_pose_track: fps must be positive");
  PoseTrack track;
  track.fps = fps;
  const auto n = static_cast<std::size_t>(std::llround(duration * fps));
  track.frames.resize(n);
  for (std::size_t f = 0; f < n; ++f) {
    const double t = static_cast<double>(f) / fps;
    track.frames[f].positions = clip_world_positions(clip, placement, t);
    for (std::size_t m = 0; m < kMuscleCount; ++m)
      track.frames[f].rotations[m] = clip.rotation_at(static_cast<Muscle>(m), t);
    for (const auto& p : track.frames[f].positions)
      if (!p.allFinite()) throw std::runtime_error("pose track: non-finite joint position");
  }
  return track;
}

struct LimitViolation {
  Muscle muscle = Muscle::pelvis;
  std::size_t keyframe = 0;
  int axis = 0;                ///< 0 = x, 1 = y, 2 = z
  double overshoot_deg = 0.0;  ///< signed: positive above the upper limit, negative below the lower
  bool operator==(const LimitViolation&) const = default;
};

struct ClampResult {
  RotationChannels channels;
  std::vector<LimitViolation> violations;
};

/// Clamps every rotation component into its joint's limit interval and
/// reports each clamp event.
inline ClampResult enforce_limits(RotationChannels channels, const RagdollSpec& spec) {
  ClampResult out;
  for (std::size_t m = 0; m < kMuscleCount; ++m) {
    const Joint& joint = spec.skeleton().joints[m];
    auto& track = channels[m];
    for (std::size_t k = 0; k < track.size(); ++k) {
      for (int a = 0; a < 3; ++a) {
        double& v = track[k].euler_deg[a];
        const Range& lim = joint.limits[static_cast<std::size_t>(a)];
        if (v > lim.hi) {
          out.violations.push_back({static_cast<Muscle>(m), k, a, v - lim.hi});
          v = lim.hi;
        } else if (v < lim.lo) {
          out.violations.push_back({static_cast<Muscle>(m), k, a, v - lim.lo});
          v = lim.lo;
        }
      }
    }
  }
  out.channels = std::move(channels);
  return out;
}

/// Clip-level convenience: returns the clamped clip and the report.
inline std::pair<MotionClip, std::vector<LimitViolation>> enforce_limits(MotionClip clip) {
  auto r = enforce_limits(std::move(clip.tracks), clip.skeleton);
  clip.tracks = std::move(r.channels);
  return {std::move(clip), std::move(r.violations)};
}

inline bool within_limits(const RotationChannels& channels, const RagdollSpec& spec) {
  for (std::size_t m = 0; m < kMuscleCount; ++m)
    for (const auto& key : channels[m])
      for (std::size_t a = 0; a < 3; ++a)
        if (!spec.skeleton().joints[m].limits[a].contains(key.euler_deg[static_cast<int>(a)]))
          return false;
  return true;
}

inline constexpr std::array<char, 3> kAxisNames{'x', 'y', 'z'};

}  // namespace phav
