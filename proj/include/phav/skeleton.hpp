#pragma once

// Joint hierarchies, the 15-muscle ragdoll and hierarchical forward kinematics.
//
// Conventions: right-handed, y up, a skeleton in bind pose faces +z with its
// left side towards +x. Joint rotations are Euler angles in degrees applied as
// R = Rx(x) * Ry(y) * Rz(z). A joint's world transform is
//   parent_world * Translate(bind_offset) * Rotate(joint_rotation).

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "phav/distributions.hpp"

namespace phav {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

inline Mat3 euler_deg_to_matrix(const Vec3& euler_deg) {
  const Mat3 rx = Eigen::AngleAxisd(deg2rad(euler_deg.x()), Vec3::UnitX()).toRotationMatrix();
  const Mat3 ry = Eigen::AngleAxisd(deg2rad(euler_deg.y()), Vec3::UnitY()).toRotationMatrix();
  const Mat3 rz = Eigen::AngleAxisd(deg2rad(euler_deg.z()), Vec3::UnitZ()).toRotationMatrix();
  return rx * ry * rz;
}

inline Mat3 heading_matrix(double heading_deg) {
  return Eigen::AngleAxisd(deg2rad(heading_deg), Vec3::UnitY()).toRotationMatrix();
}

struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  RigidTransform compose(const RigidTransform& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }
};

/// Where a skeleton is placed in the world: ground position and heading about +y.
struct RootPlacement {
  Vec3 position = Vec3::Zero();
  double heading_deg = 0.0;

  RigidTransform transform() const { return {heading_matrix(heading_deg), position}; }
  bool operator==(const RootPlacement&) const = default;
};

struct Joint {
  std::string name;
  int parent = -1;  ///< index of the parent joint, -1 for the root
  Vec3 offset = Vec3::Zero();  ///< bind-pose offset from the parent, meters
  std::array<Range, 3> limits{Range{-180, 180}, Range{-180, 180}, Range{-180, 180}};  ///< degrees
  Vec3 rest = Vec3::Zero();  ///< bind-pose rotation, degrees
  double strength = 1.0;

  bool operator==(const Joint&) const = default;
};

/// Any tree of joints stored parent-before-child.
struct Skeleton {
  std::vector<Joint> joints;

  std::size_t size() const noexcept { return joints.size(); }

  int find(std::string_view name) const {
    for (std::size_t i = 0; i < joints.size(); ++i)
      if (joints[i].name == name) return static_cast<int>(i);
    return -1;
  }

  /// Throws unless the joints form a tree rooted at index 0 in topological order.
  void validate() const {
    if (joints.empty()) throw std::invalid_argument("skeleton: no joints");
    if (joints[0].parent != -1) throw std::invalid_argument("skeleton: joint 0 must be the root");
    for (std::size_t i = 1; i < joints.size(); ++i) {
      const int p = joints[i].parent;
      if (p < 0 || static_cast<std::size_t>(p) >= i)
        throw std::invalid_argument("skeleton: joint '" + joints[i].name +
                                    "' must have an earlier parent");
    }
    for (const auto& j : joints)
      for (const auto& r : j.limits)
        if (!r.valid())
          throw std::invalid_argument("skeleton: invalid angular limits on '" + j.name + "'");
  }

  bool operator==(const Skeleton&) const = default;
};

/// World transforms of every joint given local rotation matrices.
inline std::vector<RigidTransform> forward_kinematics_transforms(
    const Skeleton& skeleton, std::span<const Mat3> local_rotations, const RigidTransform& root) {
  if (local_rotations.size() != skeleton.size())
    throw std::invalid_argument("forward_kinematics: rotation count does not match skeleton");
  std::vector<RigidTransform> world(skeleton.size());
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    const Joint& j = skeleton.joints[i];
    const RigidTransform& parent = j.parent < 0 ? root : world[static_cast<std::size_t>(j.parent)];
    world[i] = parent.compose(RigidTransform{local_rotations[i], j.offset});
  }
  return world;
}

inline std::vector<Vec3> forward_kinematics(const Skeleton& skeleton,
                                            std::span<const Mat3> local_rotations,
                                            const RigidTransform& root) {
  std::vector<Vec3> positions;
  positions.reserve(skeleton.size());
  for (const auto& t : forward_kinematics_transforms(skeleton, local_rotations, root))
    positions.push_back(t.translation);
  return positions;
}

// ---------------------------------------------------------------------------
// The ragdoll

inline constexpr std::size_t kMuscleCount = 15;

enum class Muscle {
  pelvis, spine, head,
  upper_arm_l, forearm_l, hand_l,
  upper_arm_r, forearm_r, hand_r,
  thigh_l, calf_l, foot_l,
  thigh_r, calf_r, foot_r
};

inline constexpr std::array<std::string_view, kMuscleCount> kMuscleNames{
    "pelvis",      "spine",     "head",    "upper_arm_l", "forearm_l",
    "hand_l",      "upper_arm_r", "forearm_r", "hand_r",  "thigh_l",
    "calf_l",      "foot_l",    "thigh_r", "calf_r",      "foot_r"};

inline std::string_view to_string(Muscle m) { return kMuscleNames.at(static_cast<std::size_t>(m)); }

inline std::optional<Muscle> muscle_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kMuscleCount; ++i)
    if (kMuscleNames[i] == name) return static_cast<Muscle>(i);
  return std::nullopt;
}

/// Bitset over the 15 muscles.
class MuscleSet {
 public:
  MuscleSet() = default;
  MuscleSet(std::initializer_list<Muscle> ms) {
    for (auto m : ms) insert(m);
  }
  static MuscleSet all() {
    MuscleSet s;
    s.bits_ = (1u << kMuscleCount) - 1u;
    return s;
  }

  void insert(Muscle m) { bits_ |= 1u << static_cast<unsigned>(m); }
  void erase(Muscle m) { bits_ &= ~(1u << static_cast<unsigned>(m)); }
  bool contains(Muscle m) const { return (bits_ >> static_cast<unsigned>(m)) & 1u; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

  MuscleSet operator|(MuscleSet o) const { return from_bits(bits_ | o.bits_); }
  MuscleSet operator&(MuscleSet o) const { return from_bits(bits_ & o.bits_); }
  MuscleSet complement() const { return from_bits(~bits_ & all().bits_); }
  bool is_subset_of(MuscleSet o) const { return (bits_ & ~o.bits_) == 0; }

  std::vector<Muscle> members() const {
    std::vector<Muscle> out;
    for (std::size_t i = 0; i < kMuscleCount; ++i)
      if ((bits_ >> i) & 1u) out.push_back(static_cast<Muscle>(i));
    return out;
  }

  std::uint32_t bits() const { return bits_; }
  static MuscleSet from_bits(std::uint32_t b) {
    MuscleSet s;
    s.bits_ = b & ((1u << kMuscleCount) - 1u);
    return s;
  }
  bool operator==(const MuscleSet&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

/// A skeleton holding exactly the 15 ragdoll muscles, in canonical order,
/// rooted at the pelvis.
class RagdollSpec {
 public:
  RagdollSpec() : RagdollSpec(default_skeleton()) {}

  explicit RagdollSpec(Skeleton skeleton) : skeleton_(std::move(skeleton)) {
    skeleton_.validate();
    if (skeleton_.size() != kMuscleCount)
      throw std::invalid_argument("ragdoll: expected 15 muscles, got " +
                                  std::to_string(skeleton_.size()));
    for (std::size_t i = 0; i < kMuscleCount; ++i)
      if (skeleton_.joints[i].name != kMuscleNames[i])
        throw std::invalid_argument("ragdoll: muscle " + std::to_string(i) + " must be '" +
                                    std::string(kMuscleNames[i]) + "', got '" +
                                    skeleton_.joints[i].name + "'");
    for (const auto& j : skeleton_.joints)
      if (!(j.strength >= 0.0 && j.strength <= 1.0))
        throw std::invalid_argument("ragdoll: strength of '" + j.name + "' outside [0, 1]");
  }

  const Skeleton& skeleton() const noexcept { return skeleton_; }
  const Joint& muscle(Muscle m) const { return skeleton_.joints[static_cast<std::size_t>(m)]; }
  Joint& muscle(Muscle m) { return skeleton_.joints[static_cast<std::size_t>(m)]; }

  bool operator==(const RagdollSpec&) const = default;

  /// Humanoid of about 1.6 m with arms hanging at the sides.
  static Skeleton default_skeleton() {
    auto j = [](std::string_view name, int parent, Vec3 offset, Range x, Range y, Range z) {
      Joint jt;
      jt.name = std::string(name);
      jt.parent = parent;
      jt.offset = offset;
      jt.limits = {x, y, z};
      return jt;
    };
    using M = Muscle;
    auto idx = [](M m) { return static_cast<int>(m); };
    Skeleton s;
    s.joints = {
        j("pelvis", -1, {0, 0.95, 0}, {-90, 90}, {-180, 180}, {-45, 45}),
        j("spine", idx(M::pelvis), {0, 0.25, 0}, {-40, 80}, {-60, 60}, {-40, 40}),
        j("head", idx(M::spine), {0, 0.30, 0}, {-50, 60}, {-80, 80}, {-40, 40}),
        j("upper_arm_l", idx(M::spine), {0.18, 0.22, 0}, {-180, 60}, {-90, 90}, {-30, 180}),
        j("forearm_l", idx(M::upper_arm_l), {0, -0.28, 0}, {-150, 0}, {-90, 90}, {-10, 10}),
        j("hand_l", idx(M::forearm_l), {0, -0.25, 0}, {-70, 80}, {-30, 30}, {-30, 30}),
        j("upper_arm_r", idx(M::spine), {-0.18, 0.22, 0}, {-180, 60}, {-90, 90}, {-180, 30}),
        j("forearm_r", idx(M::upper_arm_r), {0, -0.28, 0}, {-150, 0}, {-90, 90}, {-10, 10}),
        j("hand_r", idx(M::forearm_r), {0, -0.25, 0}, {-70, 80}, {-30, 30}, {-30, 30}),
        j("thigh_l", idx(M::pelvis), {0.10, -0.05, 0}, {-120, 50}, {-45, 45}, {-30, 80}),
        j("calf_l", idx(M::thigh_l), {0, -0.42, 0}, {0, 150}, {-10, 10}, {-5, 5}),
        j("foot_l", idx(M::calf_l), {0, -0.42, 0}, {-45, 45}, {-20, 20}, {-30, 30}),
        j("thigh_r", idx(M::pelvis), {-0.10, -0.05, 0}, {-120, 50}, {-45, 45}, {-80, 30}),
        j("calf_r", idx(M::thigh_r), {0, -0.42, 0}, {0, 150}, {-10, 10}, {-5, 5}),
        j("foot_r", idx(M::calf_r), {0, -0.42, 0}, {-45, 45}, {-20, 20}, {-30, 30}),
    };
    return s;
  }

 private:
  Skeleton skeleton_;
};

}  // namespace phav
