#pragma once

// Motion variation: random perturbations, muscle weakening, action blending
// and object bindings, applied to a base clip's complementary muscles.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phav/distributions.hpp"
#include "phav/domain.hpp"
#include "phav/motion.hpp"

namespace phav {

struct VariationRanges {
  Range orbit_amplitude{0.02, 0.15};  ///< m
  Range orbit_frequency{0.5, 3.0};    ///< Hz
  Range weakening{0.2, 0.8};          ///< excursion factor kept
  bool operator==(const VariationRanges&) const = default;
};

struct Weakening {
  Muscle muscle = Muscle::pelvis;
  double factor = 1.0;
  bool operator==(const Weakening&) const = default;
};

struct BlendDonor {
  std::string clip_id;
  MuscleSet muscles;
  bool operator==(const BlendDonor&) const = default;
};

struct ObjectBinding {
  ObjectMode mode = ObjectMode::none;
  std::string kind;
  Muscle attach = Muscle::hand_r;  ///< meaningful for dynamic objects
  bool operator==(const ObjectBinding&) const = default;
};

struct VariationPlan {
  VariationKind mode = VariationKind::none;
  MuscleSet affected;
  std::vector<Orbit> orbits;
  std::vector<Weakening> weakening;
  std::vector<BlendDonor> donors;
  std::optional<ObjectBinding> object;

  bool empty() const {
    return mode == VariationKind::none && affected.empty() && orbits.empty() &&
           weakening.empty() && donors.empty() && !object;
  }
  bool operator==(const VariationPlan&) const = default;
};

namespace detail {

inline Vec3 random_unit_vector(RngStream& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Uniform-size, then uniform-subset draw from `pool` (non-empty).
inline std::vector<Muscle> random_subset(MuscleSet pool, RngStream& rng) {
  auto members = pool.members();
  const auto k = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(members.size())));
  rng.shuffle(std::span<Muscle>(members));
  members.resize(k);
  std::sort(members.begin(), members.end());
  return members;
}

}  // namespace detail

/// Draws a variation plan for one scenario. Blending needs the library to draw
/// donors from; the base clip is never its own donor.
inline VariationPlan plan_variation(const ActionSpec& spec, VariationKind v, RngStream& rng,
                                    const MotionLibrary* library = nullptr,
                                    std::string_view base_clip = {},
                                    const VariationRanges& ranges = {}) {
  VariationPlan plan;
  plan.mode = v;
  if (v == VariationKind::none) return plan;

  if (v == VariationKind::objects) {
    if (spec.object.mode == ObjectMode::none)
      throw std::invalid_argument("plan_variation: action '" + spec.name +
                                  "' has no object protocol");
    plan.object = ObjectBinding{spec.object.mode, spec.object.kind, spec.object.attach};
    return plan;
  }

  if (spec.complementary.empty())
    throw std::invalid_argument("plan_variation: action '" + spec.name +
                                "' has no complementary muscles");
  const auto affected = detail::random_subset(spec.complementary, rng);
  for (auto m : affected) plan.affected.insert(m);

  switch (v) {
    case VariationKind::perturbation:
      for (auto m : affected) {
        Orbit o;
        o.muscle = m;
        o.amplitude = uniform_sample(ranges.orbit_amplitude, rng);
        o.frequency = uniform_sample(ranges.orbit_frequency, rng);
        o.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        o.axis_u = detail::random_unit_vector(rng);
        Vec3 w = detail::random_unit_vector(rng);
        Vec3 vv = o.axis_u.cross(w);
        if (vv.norm() < 1e-6) vv = o.axis_u.unitOrthogonal();
        o.axis_v = vv.normalized();
        plan.orbits.push_back(o);
      }
      break;
    case VariationKind::weakening:
      for (auto m : affected) plan.weakening.push_back({m, uniform_sample(ranges.weakening, rng)});
      break;
    case VariationKind::blending: {
      if (library == nullptr) throw std::invalid_argument("plan_variation: blending needs a library");
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < library->clips().size(); ++i)
        if (library->clips()[i].id != base_clip) candidates.push_back(i);
      if (candidates.empty())
        throw std::invalid_argument("plan_variation: no donor clips besides the base clip");
      const std::size_t max_donors = std::min<std::size_t>({2, affected.size(), candidates.size()});
      const auto n_donors = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_donors)));
      rng.shuffle(std::span<std::size_t>(candidates));
      auto order = affected;
      rng.shuffle(std::span<Muscle>(order));
      const std::size_t split =
          n_donors == 1 ? order.size()
                        : static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(order.size()) - 1));
      for (std::size_t d = 0; d < n_donors; ++d) {
        BlendDonor donor;
        donor.clip_id = library->clips()[candidates[d]].id;
        const std::size_t lo = d == 0 ? 0 : split;
        const std::size_t hi = d == 0 ? split : order.size();
        for (std::size_t i = lo; i < hi; ++i) donor.muscles.insert(order[i]);
        plan.donors.push_back(std::move(donor));
      }
      break;
    }
    default:
      break;
  }
  return plan;
}

/// Applies `plan` to `clip`; channels outside the affected set are untouched.
inline MotionClip apply_variation(const MotionClip& clip, const VariationPlan& plan,
                                  const RagdollSpec& ragdoll, const MotionLibrary* library = nullptr) {
  MotionClip out = clip;
  switch (plan.mode) {
    case VariationKind::none:
    case VariationKind::objects:
      break;
    case VariationKind::perturbation:
      for (const auto& o : plan.orbits) out.orbits.push_back(o);
      break;
    case VariationKind::weakening:
      for (const auto& w : plan.weakening) {
        const Vec3 rest = ragdoll.muscle(w.muscle).rest;
        for (auto& key : out.track(w.muscle))
          for (int a = 0; a < 3; ++a) key.euler_deg[a] = std::lerp(rest[a], key.euler_deg[a], w.factor);
      }
      break;
    case VariationKind::blending:
      if (library == nullptr) throw std::invalid_argument("apply_variation: blending needs a library");
      for (const auto& d : plan.donors) {
        const MotionClip* donor = library->find_clip(d.clip_id);
        if (donor == nullptr)
          throw std::invalid_argument("apply_variation: unknown donor clip '" + d.clip_id + "'");
        const double warp = clip.duration / donor->duration;
        for (auto m : d.muscles.members()) {
          const auto& src = donor->track(m);
          if (src.empty())
            throw std::invalid_argument("apply_variation: donor clip '" + d.clip_id +
                                        "' lacks channel '" + std::string(to_string(m)) + "'");
          auto& dst = out.track(m);
          dst.clear();
          for (const auto& key : src) dst.push_back({key.time * warp, key.euler_deg});
        }
      }
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace io {

inline json plan_to_json(const VariationPlan& p) {
  json j = {{"mode", std::string(to_string(p.mode))}, {"affected", muscle_set_to_json(p.affected)}};
  json orbits = json::array();
  for (const auto& o : p.orbits)
    orbits.push_back({{"muscle", std::string(to_string(o.muscle))},
                      {"amplitude", o.amplitude},
                      {"frequency", o.frequency},
                      {"phase", o.phase},
                      {"u", vec_to_json(o.axis_u)},
                      {"v", vec_to_json(o.axis_v)}});
  j["orbits"] = std::move(orbits);
  json weak = json::array();
  for (const auto& w : p.weakening)
    weak.push_back({{"muscle", std::string(to_string(w.muscle))}, {"factor", w.factor}});
  j["weakening"] = std::move(weak);
  json donors = json::array();
  for (const auto& d : p.donors)
    donors.push_back({{"clip", d.clip_id}, {"muscles", muscle_set_to_json(d.muscles)}});
  j["donors"] = std::move(donors);
  if (p.object) {
    j["object"] = object_protocol_to_json({p.object->mode, p.object->kind, p.object->attach});
  } else {
    j["object"] = nullptr;
  }
  return j;
}

inline VariationPlan plan_from_json(const json& j) {
  VariationPlan p;
  const std::string ctx = "variation plan";
  p.mode = parse_enum<VariationKind>(j.at("mode").get<std::string>());
  p.affected = muscle_set_from_json(j.at("affected"), ctx);
  for (const auto& o : j.value("orbits", json::array())) {
    Orbit orb;
    orb.muscle = muscle_from_json(o.at("muscle"), ctx);
    orb.amplitude = o.at("amplitude").get<double>();
    orb.frequency = o.at("frequency").get<double>();
    orb.phase = o.at("phase").get<double>();
    orb.axis_u = vec_from_json(o.at("u"), ctx);
    orb.axis_v = vec_from_json(o.at("v"), ctx);
    p.orbits.push_back(orb);
  }
  for (const auto& w : j.value("weakening", json::array()))
    p.weakening.push_back({muscle_from_json(w.at("muscle"), ctx), w.at("factor").get<double>()});
  for (const auto& d : j.value("donors", json::array()))
    p.donors.push_back({d.at("clip").get<std::string>(), muscle_set_from_json(d.at("muscles"), ctx)});
  if (j.contains("object") && !j["object"].is_null()) {
    const auto proto = object_protocol_from_json(j["object"], ctx);
    p.object = ObjectBinding{proto.mode, proto.kind, proto.attach};
  }
  return p;
}

}  // namespace io

}  // namespace phav
