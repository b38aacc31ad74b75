#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "phav/default_library.hpp"
#include "phav/ragdoll.hpp"
#include "phav/variation.hpp"
#include "test_support.hpp"

using namespace phav;
using phav::testing::constant_clip;
using phav::testing::rot_x;
using phav::testing::rot_y;
using phav::testing::rot_z;

namespace {

const MotionLibrary& lib() {
  static const MotionLibrary l = default_library();
  return l;
}

const ActionSpec& spec_of(const std::string& name) { return lib().specs()[*lib().find_action(name)]; }

double rad(double deg) { return deg * std::numbers::pi / 180.0; }

Skeleton two_link(double l1, double l2) {
  Skeleton s;
  s.joints.resize(3);
  s.joints[0].name = "shoulder";
  s.joints[1] = Joint{"elbow", 0, Vec3(0, -l1, 0)};
  s.joints[2] = Joint{"wrist", 1, Vec3(0, -l2, 0)};
  return s;
}

}  // namespace

TEST(Euler, ComposesXThenYThenZ) {
  for (const Vec3& e : {Vec3(10, 0, 0), Vec3(0, -35, 0), Vec3(0, 0, 80), Vec3(12, -47, 133), Vec3(-170, 89, -5)})
    EXPECT_TRUE(euler_deg_to_matrix(e).isApprox(rot_x(e.x()) * rot_y(e.y()) * rot_z(e.z()), 1e-14)) << e.transpose();
}

TEST(ForwardKinematics, TwoLinkPlanarArm) {
  const double l1 = 0.3, l2 = 0.25;
  const Skeleton s = two_link(l1, l2);
  for (double a : {0.0, 30.0, -45.0, 90.0, 137.0}) {
    for (double b : {0.0, 15.0, -60.0, 120.0}) {
      const std::array<Mat3, 3> r{rot_x(a), rot_x(b), Mat3::Identity()};
      const auto p = forward_kinematics(s, r, RigidTransform{});
      // Rotation about x maps (0, y, 0) to (0, y cos t, y sin t).
      const Vec3 elbow(0, -l1 * std::cos(rad(a)), -l1 * std::sin(rad(a)));
      const Vec3 wrist = elbow + Vec3(0, -l2 * std::cos(rad(a + b)), -l2 * std::sin(rad(a + b)));
      EXPECT_LT((p[0] - Vec3::Zero()).norm(), 1e-12);
      EXPECT_LT((p[1] - elbow).norm(), 1e-9);
      EXPECT_LT((p[2] - wrist).norm(), 1e-9);
    }
  }
}

TEST(ForwardKinematics, RootTransformAppliesToWholeChain) {
  const Skeleton s = two_link(1.0, 1.0);
  const std::array<Mat3, 3> r{rot_z(90), Mat3::Identity(), Mat3::Identity()};
  const RigidTransform root{rot_y(90), Vec3(1, 2, 3)};
  const auto p = forward_kinematics(s, r, root);
  // rot_z(90) sends -y to +x; rot_y(90) sends +x to -z.
  EXPECT_LT((p[1] - Vec3(1, 2, 2)).norm(), 1e-12);
  EXPECT_LT((p[2] - Vec3(1, 2, 1)).norm(), 1e-12);
}

TEST(ForwardKinematics, RejectsWrongRotationCount) {
  const Skeleton s = two_link(1.0, 1.0);
  const std::array<Mat3, 2> r{Mat3::Identity(), Mat3::Identity()};
  EXPECT_THROW(forward_kinematics(s, r, RigidTransform{}), std::invalid_argument);
}

TEST(ForwardKinematics, DefaultSkeletonRestPose) {
  const auto clip = constant_clip("rest", "x", 1.0);
  const auto p = clip_world_positions(clip, RootPlacement{}, 0.0);
  EXPECT_LT((p[static_cast<int>(Muscle::head)] - Vec3(0, 1.50, 0)).norm(), 1e-12);
  EXPECT_LT((p[static_cast<int>(Muscle::hand_l)] - Vec3(0.18, 0.95 + 0.25 + 0.22 - 0.28 - 0.25, 0)).norm(), 1e-12);
  EXPECT_LT((p[static_cast<int>(Muscle::foot_r)] - Vec3(-0.10, 0.95 - 0.05 - 0.84, 0)).norm(), 1e-12);
}

TEST(ForwardKinematics, SignConventions) {
  std::array<Vec3, kMuscleCount> pose;
  pose.fill(Vec3::Zero());
  pose[static_cast<int>(Muscle::upper_arm_r)] = Vec3(-90, 0, 0);
  pose[static_cast<int>(Muscle::calf_l)] = Vec3(90, 0, 0);
  pose[static_cast<int>(Muscle::upper_arm_l)] = Vec3(0, 0, 90);
  const auto p = clip_world_positions(constant_clip("s", "x", 1.0, pose), RootPlacement{}, 0.0);
  const auto at = [&](Muscle m) { return p[static_cast<int>(m)]; };
  EXPECT_GT(at(Muscle::hand_r).z() - at(Muscle::upper_arm_r).z(), 0.5);   // arm raised forward
  EXPECT_LT(at(Muscle::foot_l).z() - at(Muscle::calf_l).z(), -0.4);       // knee flexes backward
  EXPECT_GT(at(Muscle::hand_l).x() - at(Muscle::upper_arm_l).x(), 0.5);   // left arm abducts outward
}

TEST(ForwardKinematics, PlacementRotatesAboutVertical) {
  const auto clip = constant_clip("rest", "x", 1.0);
  const auto a = clip_world_positions(clip, RootPlacement{}, 0.0);
  const auto b = clip_world_positions(clip, RootPlacement{Vec3(5, 0, -2), 90.0}, 0.0);
  for (std::size_t m = 0; m < kMuscleCount; ++m)
    EXPECT_LT((b[m] - (rot_y(90) * a[m] + Vec3(5, 0, -2))).norm(), 1e-12);
}

TEST(ForwardKinematics, FrameIndexIsBounded) {
  const auto clip = constant_clip("rest", "x", 1.0);
  EXPECT_NO_THROW(forward_kinematics(clip, RootPlacement{}, 29, 30.0));
  EXPECT_THROW(forward_kinematics(clip, RootPlacement{}, 30, 30.0), std::out_of_range);
  EXPECT_EQ(compute_pose_track(clip, RootPlacement{}, 1.0, 30.0).frames.size(), 30u);
}

TEST(Limits, ClampAndReportSignedOvershoot) {
  auto clip = constant_clip("c", "x", 1.0);
  clip.track(Muscle::pelvis)[0].euler_deg = Vec3(94, 0, 0);
  clip.track(Muscle::calf_r)[1].euler_deg = Vec3(-3, 0, 0);
  auto [clamped, report] = enforce_limits(clip);
  ASSERT_EQ(report.size(), 2u);
  EXPECT_EQ(report[0], (LimitViolation{Muscle::pelvis, 0, 0, 4.0}));
  EXPECT_EQ(report[1], (LimitViolation{Muscle::calf_r, 1, 0, -3.0}));
  EXPECT_EQ(clamped.track(Muscle::pelvis)[0].euler_deg.x(), 90.0);
  EXPECT_EQ(clamped.track(Muscle::calf_r)[1].euler_deg.x(), 0.0);
  EXPECT_TRUE(within_limits(clamped.tracks, clamped.skeleton));
  EXPECT_FALSE(within_limits(clip.tracks, clip.skeleton));
  auto [again, none] = enforce_limits(clamped);
  EXPECT_TRUE(none.empty());
  EXPECT_EQ(again, clamped);
}

TEST(Limits, DefaultClipsOnlyRawMocapExceeds) {
  std::size_t raw = 0;
  for (const auto& c : lib().clips())
    if (!enforce_limits(c).second.empty()) ++raw;
  EXPECT_GE(raw, 1u);
  EXPECT_LE(raw, 5u);
}

TEST(Variation, NoneIsIdentity) {
  RngStream rng(1, "v");
  const auto& spec = spec_of("kick ball");
  const auto plan = plan_variation(spec, VariationKind::none, rng, &lib(), "x");
  EXPECT_TRUE(plan.empty());
  for (const auto& c : lib().clips()) ASSERT_EQ(apply_variation(c, plan, c.skeleton, &lib()), c);
}

TEST(Variation, AffectedSetAvoidsCriticalMuscles) {
  RngStream rng(2, "v");
  for (int i = 0; i < 400; ++i) {
    const auto& spec = lib().specs()[rng.uniform_index(lib().action_count())];
    for (VariationKind v : {VariationKind::perturbation, VariationKind::weakening, VariationKind::blending}) {
      const auto plan = plan_variation(spec, v, rng, &lib(), "no-such-clip");
      ASSERT_FALSE(plan.affected.empty());
      ASSERT_TRUE(plan.affected.is_subset_of(spec.complementary)) << spec.name;
      ASSERT_TRUE((plan.affected & spec.critical).empty());
    }
  }
}

TEST(Variation, BlendDonorsPartitionAffectedSet) {
  RngStream rng(3, "blend");
  const auto& base = lib().clips()[0];
  for (int i = 0; i < 300; ++i) {
    const auto& spec = lib().specs()[rng.uniform_index(lib().action_count())];
    const auto plan = plan_variation(spec, VariationKind::blending, rng, &lib(), base.id);
    ASSERT_GE(plan.donors.size(), 1u);
    ASSERT_LE(plan.donors.size(), 2u);
    MuscleSet all;
    for (const auto& d : plan.donors) {
      ASSERT_NE(d.clip_id, base.id);
      ASSERT_FALSE(d.muscles.empty());
      ASSERT_TRUE((all & d.muscles).empty());
      all = all | d.muscles;
    }
    ASSERT_EQ(all, plan.affected);
  }
}

TEST(Variation, BlendCopiesTimeWarpedDonorChannels) {
  const auto& spec = spec_of("wave");
  const MotionClip& base = lib().clips()[admissible_motions(*lib().find_action("wave"), lib(), 1.0).indices().front()];
  RngStream rng(4, "blend");
  const auto plan = plan_variation(spec, VariationKind::blending, rng, &lib(), base.id);
  const auto out = apply_variation(base, plan, base.skeleton, &lib());
  for (const auto& d : plan.donors) {
    const MotionClip& donor = *lib().find_clip(d.clip_id);
    for (auto m : d.muscles.members()) {
      ASSERT_EQ(out.track(m).size(), donor.track(m).size());
      for (std::size_t k = 0; k < donor.track(m).size(); ++k) {
        EXPECT_DOUBLE_EQ(out.track(m)[k].time, donor.track(m)[k].time * base.duration / donor.duration);
        EXPECT_EQ(out.track(m)[k].euler_deg, donor.track(m)[k].euler_deg);
      }
    }
  }
  for (auto m : plan.affected.complement().members()) EXPECT_EQ(out.track(m), base.track(m));
}

TEST(Variation, WeakeningScalesTowardRest) {
  const auto& spec = spec_of("run");
  const auto& base = lib().clips()[admissible_motions(*lib().find_action("run"), lib(), 1.0).indices().front()];
  RngStream rng(5, "weak");
  const auto plan = plan_variation(spec, VariationKind::weakening, rng, &lib(), base.id);
  const auto out = apply_variation(base, plan, base.skeleton, &lib());
  for (const auto& w : plan.weakening) {
    ASSERT_GE(w.factor, 0.2);
    ASSERT_LE(w.factor, 0.8);
    const Vec3 rest = base.skeleton.muscle(w.muscle).rest;
    for (std::size_t k = 0; k < base.track(w.muscle).size(); ++k) {
      const Vec3 expected = rest + w.factor * (base.track(w.muscle)[k].euler_deg - rest);
      EXPECT_LT((out.track(w.muscle)[k].euler_deg - expected).norm(), 1e-12);
    }
  }
  for (auto m : plan.affected.complement().members()) EXPECT_EQ(out.track(m), base.track(m));
}

TEST(Variation, PerturbationDisplacesOnlyAffectedBodies) {
  const auto& spec = spec_of("walk");
  const auto& base = lib().clips()[admissible_motions(*lib().find_action("walk"), lib(), 1.0).indices().front()];
  RngStream rng(6, "perturb");
  const auto plan = plan_variation(spec, VariationKind::perturbation, rng, &lib(), base.id);
  const auto out = apply_variation(base, plan, base.skeleton, &lib());
  EXPECT_EQ(out.tracks, base.tracks);
  for (double t : {0.0, 0.37, 1.9}) {
    const auto a = clip_world_positions(base, RootPlacement{}, t);
    const auto b = clip_world_positions(out, RootPlacement{}, t);
    for (std::size_t m = 0; m < kMuscleCount; ++m) {
      const double d = (b[m] - a[m]).norm();
      if (plan.affected.contains(static_cast<Muscle>(m))) {
        const auto& o = *std::find_if(plan.orbits.begin(), plan.orbits.end(),
                                      [&](const Orbit& x) { return x.muscle == static_cast<Muscle>(m); });
        EXPECT_NEAR(d, o.amplitude, 1e-12);
      } else {
        EXPECT_EQ(d, 0.0);
      }
    }
  }
  for (const auto& o : plan.orbits) {
    EXPECT_NEAR(o.axis_u.norm(), 1.0, 1e-12);
    EXPECT_NEAR(o.axis_v.norm(), 1.0, 1e-12);
    EXPECT_NEAR(o.axis_u.dot(o.axis_v), 0.0, 1e-12);
  }
}

TEST(Variation, ObjectsRecordBindingOnly) {
  RngStream rng(7, "obj");
  const auto plan = plan_variation(spec_of("kick ball"), VariationKind::objects, rng, &lib(), "x");
  ASSERT_TRUE(plan.object.has_value());
  EXPECT_EQ(plan.object->mode, ObjectMode::dynamic);
  EXPECT_TRUE(plan.affected.empty());
  EXPECT_THROW(plan_variation(spec_of("run"), VariationKind::objects, rng, &lib(), "x"), std::invalid_argument);
  EXPECT_THROW(plan_variation(spec_of("run"), VariationKind::blending, rng, nullptr, "x"), std::invalid_argument);
}

TEST(Variation, UnknownDonorIsRejected) {
  VariationPlan plan;
  plan.mode = VariationKind::blending;
  plan.affected = {Muscle::head};
  plan.donors.push_back({"missing", {Muscle::head}});
  const auto& c = lib().clips()[0];
  EXPECT_THROW(apply_variation(c, plan, c.skeleton, &lib()), std::invalid_argument);
}

TEST(Variation, PlanJsonRoundTrip) {
  RngStream rng(8, "json");
  for (VariationKind v : {VariationKind::none, VariationKind::perturbation, VariationKind::weakening,
                          VariationKind::blending}) {
    const auto plan = plan_variation(spec_of("wave"), v, rng, &lib(), "x");
    EXPECT_EQ(io::plan_from_json(io::plan_to_json(plan)), plan);
  }
  const auto obj = plan_variation(spec_of("sit"), VariationKind::objects, rng, &lib(), "x");
  EXPECT_EQ(io::plan_from_json(io::plan_to_json(obj)), obj);
}
