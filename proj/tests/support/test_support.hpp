#pragma once

// Helpers shared by the unit tests and the acceptance binary: scratch
// directories, file comparison and hand-written rotation oracles.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <Eigen/Dense>

#include "phav/motion.hpp"

namespace phav::testing {

namespace fs = std::filesystem;

/// Fresh empty directory under `root`.
inline fs::path scratch_dir(const fs::path& root, const std::string& name) {
  const fs::path p = root / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// True when both trees hold the same relative paths with identical bytes.
inline bool same_tree(const fs::path& a, const fs::path& b) {
  std::size_t count_a = 0, count_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++count_a;
    const fs::path other = b / fs::relative(e.path(), a);
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
  }
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) ++count_b;
  return count_a == count_b;
}

// Elementary rotations written out by hand, degrees.
inline Eigen::Matrix3d rot_x(double deg) {
  const double r = deg * M_PI / 180.0, c = std::cos(r), s = std::sin(r);
  Eigen::Matrix3d m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return m;
}
inline Eigen::Matrix3d rot_y(double deg) {
  const double r = deg * M_PI / 180.0, c = std::cos(r), s = std::sin(r);
  Eigen::Matrix3d m;
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return m;
}
inline Eigen::Matrix3d rot_z(double deg) {
  const double r = deg * M_PI / 180.0, c = std::cos(r), s = std::sin(r);
  Eigen::Matrix3d m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

/// A clip holding every muscle at `pose` (degrees) for `duration` seconds.
inline MotionClip constant_clip(std::string id, std::string description, double duration,
                                const std::array<Vec3, kMuscleCount>& pose) {
  MotionClip c;
  c.id = std::move(id);
  c.description = std::move(description);
  c.duration = duration;
  for (std::size_t m = 0; m < kMuscleCount; ++m) {
    c.tracks[m].push_back({0.0, pose[m]});
    c.tracks[m].push_back({duration, pose[m]});
  }
  return c;
}

inline MotionClip constant_clip(std::string id, std::string description, double duration) {
  std::array<Vec3, kMuscleCount> pose;
  pose.fill(Vec3::Zero());
  return constant_clip(std::move(id), std::move(description), duration, pose);
}

}  // namespace phav::testing
