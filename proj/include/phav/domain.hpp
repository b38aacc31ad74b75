#pragma once

// Fixed categorical domains of the generative model and their textual names.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace phav {

enum class DayPhase { dawn, day, dusk, night };
enum class Weather { clear, overcast, rain, fog };
enum class VariationKind { none, perturbation, weakening, objects, blending };
enum class CameraBehavior { kite, closeup, indoors, static_ };
enum class Environment { urban, stadium, middle, green, house, lake, simple };
enum class ActionClass { sub_hmdb, one_person, two_people };
enum class MotionSource { mocap, artist, programmed };

inline constexpr std::size_t kDayPhaseCount = 4;
inline constexpr std::size_t kWeatherCount = 4;
inline constexpr std::size_t kVariationCount = 5;
inline constexpr std::size_t kCameraCount = 4;
inline constexpr std::size_t kEnvironmentCount = 7;

namespace detail {

template <typename Enum, std::size_t N>
struct NameTable {
  std::array<std::string_view, N> names;
  std::string_view kind;

  std::string_view name(Enum e) const { return names.at(static_cast<std::size_t>(e)); }

  std::optional<Enum> lookup(std::string_view s) const {
    for (std::size_t i = 0; i < N; ++i)
      if (names[i] == s) return static_cast<Enum>(i);
    return std::nullopt;
  }

  Enum parse(std::string_view s) const {
    if (auto e = lookup(s)) return *e;
    throw std::invalid_argument("unknown " + std::string(kind) + " '" + std::string(s) + "'");
  }
};

inline constexpr NameTable<DayPhase, kDayPhaseCount> kDayPhaseNames{
    {"dawn", "day", "dusk", "night"}, "day phase"};
inline constexpr NameTable<Weather, kWeatherCount> kWeatherNames{
    {"clear", "overcast", "rain", "fog"}, "weather"};
inline constexpr NameTable<VariationKind, kVariationCount> kVariationNames{
    {"none", "perturbation", "weakening", "objects", "blending"}, "variation"};
inline constexpr NameTable<CameraBehavior, kCameraCount> kCameraNames{
    {"kite", "closeup", "indoors", "static"}, "camera behavior"};
inline constexpr NameTable<Environment, kEnvironmentCount> kEnvironmentNames{
    {"urban", "stadium", "middle", "green", "house", "lake", "simple"}, "environment"};
inline constexpr NameTable<ActionClass, 3> kActionClassNames{
    {"sub-HMDB", "one-person", "two-people"}, "action class"};
inline constexpr NameTable<MotionSource, 3> kMotionSourceNames{
    {"mocap", "artist", "programmed"}, "motion source"};

}  // namespace detail

inline std::string_view to_string(DayPhase e) { return detail::kDayPhaseNames.name(e); }
inline std::string_view to_string(Weather e) { return detail::kWeatherNames.name(e); }
inline std::string_view to_string(VariationKind e) { return detail::kVariationNames.name(e); }
inline std::string_view to_string(CameraBehavior e) { return detail::kCameraNames.name(e); }
inline std::string_view to_string(Environment e) { return detail::kEnvironmentNames.name(e); }
inline std::string_view to_string(ActionClass e) { return detail::kActionClassNames.name(e); }
inline std::string_view to_string(MotionSource e) { return detail::kMotionSourceNames.name(e); }

template <typename Enum>
Enum parse_enum(std::string_view s);

template <>
inline DayPhase parse_enum<DayPhase>(std::string_view s) { return detail::kDayPhaseNames.parse(s); }
template <>
inline Weather parse_enum<Weather>(std::string_view s) { return detail::kWeatherNames.parse(s); }
template <>
inline VariationKind parse_enum<VariationKind>(std::string_view s) {
  return detail::kVariationNames.parse(s);
}
template <>
inline CameraBehavior parse_enum<CameraBehavior>(std::string_view s) {
  return detail::kCameraNames.parse(s);
}
template <>
inline Environment parse_enum<Environment>(std::string_view s) {
  return detail::kEnvironmentNames.parse(s);
}
template <>
inline ActionClass parse_enum<ActionClass>(std::string_view s) {
  return detail::kActionClassNames.parse(s);
}
template <>
inline MotionSource parse_enum<MotionSource>(std::string_view s) {
  return detail::kMotionSourceNames.parse(s);
}

template <typename Enum>
constexpr std::size_t index_of(Enum e) noexcept {
  return static_cast<std::size_t>(e);
}

}  // namespace phav
